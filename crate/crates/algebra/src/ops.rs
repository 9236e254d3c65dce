//! Multilinear operators over an arbitrary graded vector space.
//!
//! `MultiOp` is an arity/degree-tagged multilinear map given by an evaluation
//! closure on homogeneous vectors; `None` results stand for the zero vector.
//! All unshuffle-summed products (Gerstenhaber, symmetric and skew-symmetric
//! Nijenhuis-Richardson), commutators, associators, (anti)symmetrization and
//! the decalage transport are implemented here once, generically. Finite
//! basis-indexed maps and the geometric brackets both drive this engine.
//!
//! Sign conventions, fixed throughout the crate:
//! * pulling a tuple by `sigma` reorders `x` to `(x_{sigma(1)}, ...)` and
//!   carries the Koszul sign of the odd-degree subpermutation;
//! * `f nr_sym g = sum_{sigma in ush(|g|, |f|-1)} eps(sigma)
//!   f(g(x_sigma...), x_sigma...)`;
//! * `f nr_skew g` carries the extra prefactor `(-1)^{deg(g) (arity(f)-1)}`
//!   and the odd Koszul sign `chi(sigma)`;
//! * decalage multiplies by `(-1)^{sum_i (n-i) |x_i|}` in unshifted degrees
//!   and swaps the symmetric and skew-symmetric sectors.

use crate::perm::{dec_sign, unshuffles, Permutation, Sign};
use crate::rat::Rat;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Declared symmetry sector of a multilinear map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    None,
    Symmetric,
    Skew,
}

impl Symmetry {
    pub fn flipped(self) -> Symmetry {
        match self {
            Symmetry::None => Symmetry::None,
            Symmetry::Symmetric => Symmetry::Skew,
            Symmetry::Skew => Symmetry::Symmetric,
        }
    }
}

/// Vectors the engine can combine: sparse rational linear data with a notion
/// of homogeneous degree. `degree` returns `None` for zero (or mixed) vectors.
pub trait GradedVector: Clone + Send + Sync + 'static {
    fn is_zero(&self) -> bool;
    fn degree(&self) -> Option<i64>;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rat) -> Self;
}

/// Degree of a nonzero homogeneous argument; evaluation must weed out zeros
/// before asking for signs.
fn deg_of<V: GradedVector>(v: &V) -> i64 {
    v.degree().expect("multilinear evaluation needs homogeneous nonzero arguments")
}

pub(crate) fn accumulate<V: GradedVector>(acc: &mut Option<V>, term: Option<V>) {
    if let Some(t) = term {
        *acc = match acc.take() {
            None => Some(t),
            Some(a) => Some(a.add(&t)),
        };
    }
}

pub(crate) fn normalize<V: GradedVector>(v: Option<V>) -> Option<V> {
    v.filter(|x| !x.is_zero())
}

type EvalFn<A, B> = Arc<dyn Fn(&[A]) -> Option<B> + Send + Sync>;

/// A homogeneous multilinear operator from tuples over `A` to `B`.
#[derive(Clone)]
pub struct MultiOp<A, B = A> {
    arity: usize,
    degree: i64,
    symmetry: Symmetry,
    eval: EvalFn<A, B>,
}

impl<A: GradedVector, B: GradedVector> MultiOp<A, B> {
    pub fn new(
        arity: usize,
        degree: i64,
        symmetry: Symmetry,
        eval: impl Fn(&[A]) -> Option<B> + Send + Sync + 'static,
    ) -> Self {
        MultiOp {
            arity,
            degree,
            symmetry,
            eval: Arc::new(eval),
        }
    }

    pub fn zero(arity: usize, degree: i64, symmetry: Symmetry) -> Self {
        MultiOp::new(arity, degree, symmetry, |_| None)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// The shifted grading `|f| + arity - 1` used by the skew sector.
    pub fn skew_grading(&self) -> i64 {
        self.degree + self.arity as i64 - 1
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    /// Evaluate on homogeneous arguments; `None` is the zero vector.
    pub fn eval(&self, args: &[A]) -> Option<B> {
        assert_eq!(args.len(), self.arity, "arity mismatch in evaluation");
        if args.iter().any(|a| a.is_zero()) {
            return None;
        }
        normalize((self.eval)(args))
    }

    pub fn add(&self, other: &MultiOp<A, B>) -> MultiOp<A, B> {
        assert_eq!(self.arity, other.arity, "arity mismatch in sum");
        assert_eq!(self.degree, other.degree, "degree mismatch in sum");
        let sym = if self.symmetry == other.symmetry {
            self.symmetry
        } else {
            Symmetry::None
        };
        let (f, g) = (self.clone(), other.clone());
        MultiOp::new(self.arity, self.degree, sym, move |xs| {
            let mut acc = f.eval(xs);
            accumulate(&mut acc, g.eval(xs));
            acc
        })
    }

    pub fn scale(&self, c: &Rat) -> MultiOp<A, B> {
        let f = self.clone();
        let c = c.clone();
        MultiOp::new(self.arity, self.degree, self.symmetry, move |xs| {
            if c.is_zero() {
                return None;
            }
            f.eval(xs).map(|v| v.scale(&c))
        })
    }

    pub fn sub(&self, other: &MultiOp<A, B>) -> MultiOp<A, B> {
        self.add(&other.scale(&Rat::from_int(-1)))
    }

    /// Precompose every slot with a degree 0 linear map.
    pub fn precompose_linear(&self, u: &MultiOp<A, A>) -> MultiOp<A, B> {
        assert_eq!(u.arity(), 1);
        assert_eq!(u.degree(), 0, "precompose_linear needs a degree 0 map");
        let f = self.clone();
        let u = u.clone();
        MultiOp::new(self.arity, self.degree, self.symmetry, move |xs| {
            let mapped: Option<Vec<A>> = xs.iter().map(|x| u.eval(std::slice::from_ref(x))).collect();
            f.eval(&mapped?)
        })
    }

    /// Postcompose with a linear map (any degree).
    pub fn postcompose_linear<C: GradedVector>(&self, u: &MultiOp<B, C>) -> MultiOp<A, C> {
        assert_eq!(u.arity(), 1);
        let f = self.clone();
        let u = u.clone();
        MultiOp::new(self.arity, self.degree + u.degree(), self.symmetry, move |xs| {
            let y = f.eval(xs)?;
            u.eval(std::slice::from_ref(&y))
        })
    }
}

impl<V: GradedVector> MultiOp<V, V> {
    pub fn identity() -> Self {
        MultiOp::new(1, 0, Symmetry::None, |xs: &[V]| Some(xs[0].clone()))
    }

    /// `i`-th Gerstenhaber product `f o_i g`, inserting `g` into slot `i`
    /// (1-based) with the Koszul sign `(-1)^{|g| (|x_1| + ... + |x_{i-1}|)}`.
    pub fn gerstenhaber_i(&self, g: &MultiOp<V, V>, i: usize) -> MultiOp<V, V> {
        assert!(i >= 1 && i <= self.arity, "insertion slot out of range");
        let (f, g) = (self.clone(), g.clone());
        let arity = self.arity + g.arity - 1;
        let degree = self.degree + g.degree;
        MultiOp::new(arity, degree, Symmetry::None, move |xs| {
            let gd = g.degree();
            let before = &xs[..i - 1];
            let inner = g.eval(&xs[i - 1..i - 1 + g.arity()])?;
            let mut sign: i64 = 1;
            if gd.rem_euclid(2) == 1 {
                let jumped: i64 = before.iter().map(deg_of).sum();
                if jumped.rem_euclid(2) == 1 {
                    sign = -1;
                }
            }
            let mut args: Vec<V> = before.to_vec();
            args.push(inner);
            args.extend_from_slice(&xs[i - 1 + g.arity()..]);
            f.eval(&args).map(|v| v.scale(&Rat::from_int(sign)))
        })
    }

    /// Full Gerstenhaber product: the sum of all insertions.
    pub fn gerstenhaber(&self, g: &MultiOp<V, V>) -> MultiOp<V, V> {
        let terms: Vec<MultiOp<V, V>> = (1..=self.arity).map(|i| self.gerstenhaber_i(g, i)).collect();
        let arity = self.arity + g.arity - 1;
        let degree = self.degree + g.degree;
        MultiOp::new(arity, degree, Symmetry::None, move |xs| {
            let mut acc = None;
            for t in &terms {
                accumulate(&mut acc, t.eval(xs));
            }
            acc
        })
    }

    fn nr_result_symmetry(&self, g: &MultiOp<V, V>, sector: Symmetry) -> Symmetry {
        // The unshuffle sum produces a map in `sector` whenever the inner
        // factor sits there and the outer factor is either in the same sector
        // or has at most one remaining slot.
        if g.symmetry == sector && (self.symmetry == sector || self.arity <= 2) {
            sector
        } else {
            Symmetry::None
        }
    }

    /// Symmetric Nijenhuis-Richardson product `f nr_sym g`.
    pub fn nr_sym(&self, g: &MultiOp<V, V>) -> MultiOp<V, V> {
        let arity = self.arity + g.arity - 1;
        let degree = self.degree + g.degree;
        let symmetry = self.nr_result_symmetry(g, Symmetry::Symmetric);
        let (f, g) = (self.clone(), g.clone());
        let blocks = [g.arity, self.arity - 1];
        let sigmas = if self.arity > 1 {
            unshuffles(&blocks).unwrap()
        } else {
            vec![Permutation::identity(g.arity)]
        };
        MultiOp::new(arity, degree, symmetry, move |xs| {
            nr_eval(&f, &g, &sigmas, false, xs)
        })
    }

    /// Skew-symmetric Nijenhuis-Richardson product `f nr_skew g`.
    pub fn nr_skew(&self, g: &MultiOp<V, V>) -> MultiOp<V, V> {
        let arity = self.arity + g.arity - 1;
        let degree = self.degree + g.degree;
        let symmetry = self.nr_result_symmetry(g, Symmetry::Skew);
        let prefactor = if (g.degree * (self.arity as i64 - 1)).rem_euclid(2) == 1 {
            -1i64
        } else {
            1
        };
        let (f, g) = (self.clone(), g.clone());
        let blocks = [g.arity, self.arity - 1];
        let sigmas = if self.arity > 1 {
            unshuffles(&blocks).unwrap()
        } else {
            vec![Permutation::identity(g.arity)]
        };
        MultiOp::new(arity, degree, symmetry, move |xs| {
            nr_eval(&f, &g, &sigmas, true, xs).map(|v| v.scale(&Rat::from_int(prefactor)))
        })
    }

    /// `f^{o k}` by repeated right multiplication: `f^{o k} = f^{o(k-1)} o f`.
    pub fn nr_power_sym(&self, k: usize) -> MultiOp<V, V> {
        assert!(k >= 1);
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.nr_sym(self);
        }
        acc
    }

    pub fn nr_power_skew(&self, k: usize) -> MultiOp<V, V> {
        assert!(k >= 1);
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.nr_skew(self);
        }
        acc
    }

    /// Graded commutator for the chosen product. The symmetric and full
    /// Gerstenhaber sectors grade by `|.|`; the skew sector by `|.| + arity - 1`.
    pub fn commutator(&self, g: &MultiOp<V, V>, product: Product) -> MultiOp<V, V> {
        let (fg, gf) = match product {
            Product::Gerstenhaber => (self.gerstenhaber(g), g.gerstenhaber(self)),
            Product::Sym => (self.nr_sym(g), g.nr_sym(self)),
            Product::Skew => (self.nr_skew(g), g.nr_skew(self)),
        };
        let e = match product {
            Product::Skew => self.skew_grading() * g.skew_grading(),
            _ => self.degree * g.degree,
        };
        if e.rem_euclid(2) == 0 {
            fg.sub(&gf)
        } else {
            fg.add(&gf)
        }
    }

    /// Associator `(f o g) o h - f o (g o h)` of the chosen product.
    pub fn associator(f: &Self, g: &Self, h: &Self, product: Product) -> MultiOp<V, V> {
        let apply = |a: &Self, b: &Self| match product {
            Product::Gerstenhaber => a.gerstenhaber(b),
            Product::Sym => a.nr_sym(b),
            Product::Skew => a.nr_skew(b),
        };
        apply(&apply(f, g), h).sub(&apply(f, &apply(g, h)))
    }

    /// Projection onto the symmetric sector: `f o S` with the normalized
    /// symmetrizer `S = (1/n!) sum_sigma B_sigma`.
    pub fn symmetrize(&self) -> MultiOp<V, V> {
        self.projector(false)
    }

    /// Projection onto the skew sector, with the odd action.
    pub fn antisymmetrize(&self) -> MultiOp<V, V> {
        self.projector(true)
    }

    fn projector(&self, odd: bool) -> MultiOp<V, V> {
        let f = self.clone();
        let n = self.arity;
        let sigmas = unshuffles(&vec![1; n]).unwrap(); // all of S_n
        let norm = crate::rat::factorial(n as u64).recip();
        let symmetry = if odd { Symmetry::Skew } else { Symmetry::Symmetric };
        MultiOp::new(self.arity, self.degree, symmetry, move |xs| {
            let degs: Vec<i64> = xs.iter().map(deg_of).collect();
            let mut acc = None;
            for sigma in &sigmas {
                let sign = if odd {
                    sigma.odd_koszul_sign(&degs).unwrap()
                } else {
                    sigma.koszul_sign(&degs).unwrap()
                };
                let permuted = sigma.apply(xs);
                accumulate(&mut acc, f.eval(&permuted).map(|v| v.scale(&Rat::from_int(sign))));
            }
            acc.map(|v| v.scale(&norm))
        })
    }

    /// The decalage transport of `f` to the shifted space: same arity, degree
    /// `|f| + n - 1`, symmetry flipped, evaluation twisted by the decalage sign.
    pub fn dec(&self) -> MultiOp<Shifted<V>, Shifted<V>> {
        let f = self.clone();
        let n = self.arity;
        MultiOp::new(
            n,
            self.degree + n as i64 - 1,
            self.symmetry.flipped(),
            move |xs: &[Shifted<V>]| {
                let inner: Vec<V> = xs.iter().map(|x| x.0.clone()).collect();
                let degs: Vec<i64> = inner.iter().map(deg_of).collect();
                let sign = dec_sign(&degs);
                f.eval(&inner).map(|v| Shifted(v.scale(&Rat::from_int(sign))))
            },
        )
    }
}

impl<V: GradedVector> MultiOp<Shifted<V>, Shifted<V>> {
    /// Inverse decalage: back to the unshifted space.
    pub fn dec_inv(&self) -> MultiOp<V, V> {
        let f = self.clone();
        let n = self.arity;
        MultiOp::new(
            n,
            self.degree - (n as i64 - 1),
            self.symmetry.flipped(),
            move |xs: &[V]| {
                let degs: Vec<i64> = xs.iter().map(deg_of).collect();
                let sign = dec_sign(&degs);
                let wrapped: Vec<Shifted<V>> = xs.iter().map(|x| Shifted(x.clone())).collect();
                f.eval(&wrapped).map(|v| v.0.scale(&Rat::from_int(sign)))
            },
        )
    }
}

fn nr_eval<V: GradedVector>(
    f: &MultiOp<V, V>,
    g: &MultiOp<V, V>,
    sigmas: &[Permutation],
    odd: bool,
    xs: &[V],
) -> Option<V> {
    let degs: Vec<i64> = xs.iter().map(deg_of).collect();
    let m = g.arity();
    let mut acc = None;
    for sigma in sigmas {
        let sign: Sign = if odd {
            sigma.odd_koszul_sign(&degs).unwrap()
        } else {
            sigma.koszul_sign(&degs).unwrap()
        };
        let permuted = sigma.apply(xs);
        let Some(inner) = g.eval(&permuted[..m]) else {
            continue;
        };
        if inner.is_zero() {
            continue;
        }
        let mut args = Vec::with_capacity(f.arity());
        args.push(inner);
        args.extend_from_slice(&permuted[m..]);
        accumulate(&mut acc, f.eval(&args).map(|v| v.scale(&Rat::from_int(sign))));
    }
    acc
}

/// Which product a commutator or associator refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Product {
    Gerstenhaber,
    Sym,
    Skew,
}

/// A vector of the once-shifted space `V[1]`: same data, degree lowered by 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Shifted<V>(pub V);

impl<V: GradedVector> GradedVector for Shifted<V> {
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn degree(&self) -> Option<i64> {
        self.0.degree().map(|d| d - 1)
    }
    fn add(&self, other: &Self) -> Self {
        Shifted(self.0.add(&other.0))
    }
    fn scale(&self, c: &Rat) -> Self {
        Shifted(self.0.scale(c))
    }
}

/// Arity-indexed bracket family, the common shape of an L-infinity structure
/// seen by the engine. Missing arities are zero.
pub type BracketFamily<V> = BTreeMap<usize, MultiOp<V, V>>;

/// The `n`-th higher-Jacobi operator `J_n = sum_{a+b=n+1} mu_a o mu_b` in the
/// requested sector.
pub fn jacobiator<V: GradedVector>(
    brackets: &BracketFamily<V>,
    n: usize,
    product: Product,
) -> MultiOp<V, V> {
    let degree = match product {
        Product::Sym => 1 + 1,
        _ => (2 - n as i64) + 1,
    };
    let symmetry = match product {
        Product::Sym => Symmetry::Symmetric,
        Product::Skew => Symmetry::Skew,
        Product::Gerstenhaber => Symmetry::None,
    };
    let mut acc = MultiOp::zero(n, degree, symmetry);
    for a in 1..=n {
        let b = n + 1 - a;
        let (Some(ma), Some(mb)) = (brackets.get(&a), brackets.get(&b)) else {
            continue;
        };
        let term = match product {
            Product::Gerstenhaber => ma.gerstenhaber(mb),
            Product::Sym => ma.nr_sym(mb),
            Product::Skew => ma.nr_skew(mb),
        };
        acc = acc.add(&term.with_symmetry(acc.symmetry()));
    }
    acc
}

/// Degree 0 graded-symmetric morphism components `f_k : S^k(A) -> B`,
/// the shape of an L-infinity[1]-morphism.
pub type SymComponents<A, B> = BTreeMap<usize, MultiOp<A, B>>;

// Partitions k_1 <= ... <= k_l of m into l positive parts.
fn partitions_sorted(m: usize, l: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, l: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if l == 0 {
            if m == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in min..=m {
            if m < k * l {
                break;
            }
            cur.push(k);
            rec(m - k, l - 1, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, l, 1, &mut Vec::new(), &mut out);
    out
}

/// Evaluate the unshuffle operator `S_{l,m}(f)` on a homogeneous tuple:
/// the formal sum over ordered unshuffles and sorted partitions
/// `k_1 <= ... <= k_l` of signed `l`-tuples `(f_{k_1}(block), ...)`.
///
/// Components are required to be degree 0, so the only sign is the Koszul
/// sign of the unshuffle.
pub fn s_operator<A: GradedVector, B: GradedVector>(
    f: &SymComponents<A, B>,
    l: usize,
    m: usize,
    xs: &[A],
) -> Vec<(Rat, Vec<B>)> {
    assert_eq!(xs.len(), m);
    let degs: Vec<i64> = xs.iter().map(deg_of).collect();
    let mut out = Vec::new();
    'part: for part in partitions_sorted(m, l) {
        for k in &part {
            if !f.contains_key(k) {
                continue 'part;
            }
        }
        for sigma in crate::perm::ordered_unshuffles(&part).unwrap() {
            let sign = sigma.koszul_sign(&degs).unwrap();
            let permuted = sigma.apply(xs);
            let mut tuple = Vec::with_capacity(l);
            let mut start = 0;
            let mut dead = false;
            for &k in &part {
                match f[&k].eval(&permuted[start..start + k]) {
                    Some(v) if !v.is_zero() => tuple.push(v),
                    _ => {
                        dead = true;
                        break;
                    }
                }
                start += k;
            }
            if !dead {
                out.push((Rat::from_int(sign), tuple));
            }
        }
    }
    out
}

/// Evaluate a bracket on a formal sum of tuples.
pub fn apply_to_formal_sum<A: GradedVector, B: GradedVector>(
    op: &MultiOp<A, B>,
    terms: &[(Rat, Vec<A>)],
) -> Option<B> {
    let mut acc = None;
    for (c, tuple) in terms {
        accumulate(&mut acc, op.eval(tuple).map(|v| v.scale(c)));
    }
    normalize(acc)
}

/// Composition of symmetric morphism families: `(g . f)_m = sum_l g_l o S_{l,m}(f)`.
pub fn compose_sym_components<A, B, C>(
    g: &SymComponents<B, C>,
    f: &SymComponents<A, B>,
    m: usize,
) -> MultiOp<A, C>
where
    A: GradedVector,
    B: GradedVector,
    C: GradedVector,
{
    let g = g.clone();
    let f = f.clone();
    MultiOp::new(m, 0, Symmetry::Symmetric, move |xs: &[A]| {
        let mut acc = None;
        for (l, gl) in g.range(1..=m) {
            let terms = s_operator(&f, *l, m, xs);
            accumulate(&mut acc, apply_to_formal_sum(gl, &terms));
        }
        acc
    })
}

/// The `m`-th defect of a candidate L-infinity[1]-morphism `f` between the
/// bracket families `mu` (source) and `mu_p` (target):
/// `K_m = sum_{l=1}^{m} ( f_{m-l+1} nr_sym mu_l  -  mu'_l o S_{l,m}(f) )`.
/// `f` is a morphism precisely when every defect vanishes.
pub fn sym_morphism_defect<A, B>(
    mu: &BracketFamily<A>,
    mu_p: &BracketFamily<B>,
    f: &SymComponents<A, B>,
    m: usize,
) -> MultiOp<A, B>
where
    A: GradedVector,
    B: GradedVector,
{
    let mu = mu.clone();
    let mu_p = mu_p.clone();
    let f = f.clone();
    MultiOp::new(m, 1, Symmetry::Symmetric, move |xs: &[A]| {
        let mut acc = None;
        for l in 1..=m {
            if let (Some(fc), Some(ml)) = (f.get(&(m - l + 1)), mu.get(&l)) {
                accumulate(&mut acc, nr_sym_mixed(fc, ml).eval(xs));
            }
            if let Some(mpl) = mu_p.get(&l) {
                let terms = s_operator(&f, l, m, xs);
                accumulate(
                    &mut acc,
                    apply_to_formal_sum(mpl, &terms).map(|v| v.scale(&Rat::from_int(-1))),
                );
            }
        }
        acc
    })
}

/// The iterative inverse of a morphism family whose first component is the
/// identity: `g_1 = id` and
/// `g_m = - sum_{l=1}^{m-1} g_l o S_{l,m}(f)` for `m >= 2`, so that
/// `(g . f)_m` vanishes for all `2 <= m <= max_arity`.
pub fn invert_sym_components_with_identity<V: GradedVector>(
    f: &SymComponents<V, V>,
    max_arity: usize,
) -> SymComponents<V, V> {
    let mut g: SymComponents<V, V> = SymComponents::new();
    g.insert(1, MultiOp::identity().with_symmetry(Symmetry::Symmetric));
    for m in 2..=max_arity {
        let partial = g.clone();
        let f = f.clone();
        let gm = MultiOp::new(m, 0, Symmetry::Symmetric, move |xs: &[V]| {
            let mut acc = None;
            for (l, gl) in partial.range(1..=m - 1) {
                let terms = s_operator(&f, *l, m, xs);
                accumulate(&mut acc, apply_to_formal_sum(gl, &terms));
            }
            acc.map(|v| v.scale(&Rat::from_int(-1)))
        });
        g.insert(m, gm);
    }
    g
}

/// `f_k nr_sym mu_l` for a component `f_k : A^{ o k} -> B` against a bracket
/// on `A`; same unshuffle sum as [`MultiOp::nr_sym`], mixed target.
fn nr_sym_mixed<A: GradedVector, B: GradedVector>(
    f: &MultiOp<A, B>,
    g: &MultiOp<A, A>,
) -> MultiOp<A, B> {
    let arity = f.arity() + g.arity() - 1;
    let degree = f.degree() + g.degree();
    let (f, g) = (f.clone(), g.clone());
    let blocks = [g.arity(), f.arity() - 1];
    let sigmas = if f.arity() - 1 > 0 {
        unshuffles(&blocks).unwrap()
    } else {
        vec![Permutation::identity(g.arity())]
    };
    MultiOp::new(arity, degree, Symmetry::Symmetric, move |xs| {
        let degs: Vec<i64> = xs.iter().map(deg_of).collect();
        let m = g.arity();
        let mut acc = None;
        for sigma in &sigmas {
            let sign = sigma.koszul_sign(&degs).unwrap();
            let permuted = sigma.apply(xs);
            let Some(inner) = g.eval(&permuted[..m]) else {
                continue;
            };
            let mut args = Vec::with_capacity(f.arity());
            args.push(inner);
            args.extend_from_slice(&permuted[m..]);
            accumulate(&mut acc, f.eval(&args).map(|v| v.scale(&Rat::from_int(sign))));
        }
        acc
    })
}
