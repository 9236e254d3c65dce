use plectra_algebra::{bernoulli, GradedVector, Rat, Symmetry};
use plectra_geometry::cartan::iota;
use plectra_geometry::form::PolyForm;
use plectra_geometry::mss::MssSpace;
use plectra_geometry::vino::*;

fn main() {
    let m = MssSpace::volume(5, 1);
    let corpus = section_corpus(&m);
    let k = 5usize;
    let plectic = 4;
    let half_sign = if ((k + 1) / 2) % 2 == 0 { 1i64 } else { -1 };
    let ck = bernoulli(k - 1).signed(half_sign) * Rat::from_int(12)
        / Rat::from_int(((k - 1) * (k - 2)) as i64);
    println!("c5 = {ck}, omega coeff = {}", bernoulli(k - 1).signed(half_sign) * Rat::from_int(k as i64));
    let untwisted = vinogradov_ternary(&PolyForm::zero(5, plectic + 1), plectic).scale(&Rat::from_int(-1));
    // mun-route mu5
    let vino = vinogradov_brackets(&m, 4);
    let pairing = pairing_minus(5, 4).dec();
    let coeff = Rat::from_int(3) * plectra_algebra::rat::pow2(4) * bernoulli(4)
        / plectra_algebra::rat::factorial(4);
    let mu5_mun = pairing
        .nr_power_sym(2)
        .nr_sym(&vino[&3].dec())
        .dec_inv()
        .scale(&coeff);
    for tuple in [[0usize, 1, 2, 3, 4], [0, 1, 2, 3, 9], [0, 2, 4, 6, 8]] {
        let es: Vec<VinElement> = tuple.iter().map(|&i| corpus.pairs[i].clone()).collect();
        // f-part as implemented
        let mut f_part = PolyForm::zero(5, 0);
        for i in 0..k {
            if es[i].form().is_zero() { continue; }
            let beta = VinElement::from_form(plectic, es[i].form().clone());
            let others: Vec<&VinElement> = es.iter().enumerate().filter(|(p, _)| *p != i).map(|(_, e)| e).collect();
            let sign = if (i + 1) % 2 == 0 { 1i64 } else { -1 };
            let mut inner = PolyForm::zero(5, 0);
            for a in 0..k - 1 {
                for b in a + 1..k - 1 {
                    let absign = if (a + b + 3) % 2 == 0 { 1i64 } else { -1 };
                    let Some(t3) = untwisted.eval(&[
                        beta.clone(),
                        VinElement::from_field(plectic, others[a].field().clone()),
                        VinElement::from_field(plectic, others[b].field().clone()),
                    ]) else { continue };
                    let mut cur = t3.form().clone();
                    for (p, other) in others.iter().enumerate() {
                        if p == a || p == b { continue; }
                        cur = iota(other.field(), &cur);
                    }
                    inner = inner.add(&cur.scale(&Rat::from_int(absign)));
                }
            }
            f_part = f_part.add(&inner.scale(&ck.signed(sign)));
        }
        let mut omega_part = m.omega().clone();
        for e in es.iter() { omega_part = iota(e.field(), &omega_part); }
        omega_part = omega_part.scale(&(bernoulli(4).signed(half_sign) * Rat::from_int(5)));
        let mun = mu5_mun.eval(&es).map(|v| v.form().clone()).unwrap_or_else(|| PolyForm::zero(5, 0));
        println!("tuple {:?}:", tuple);
        println!("  f_part     = {:?}", f_part);
        println!("  omega_part = {:?}", omega_part);
        println!("  mun        = {:?}", mun);
    }
    let _ = Symmetry::Skew;
}
