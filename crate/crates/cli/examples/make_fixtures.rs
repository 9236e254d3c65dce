//! Regenerates the bundled instance files under `fixtures/`.

use plectra_algebra::Rat;
use plectra_geometry::cartan::iota;
use plectra_geometry::comoment::so_n_action;
use plectra_geometry::form::PolyField;
use plectra_geometry::mss::MssSpace;

fn main() -> std::io::Result<()> {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    std::fs::create_dir_all(&root)?;
    let write = |name: &str, v: serde_json::Value| -> std::io::Result<()> {
        std::fs::write(root.join(name), format!("{}\n", serde_json::to_string_pretty(&v)?))
    };

    let r3 = MssSpace::volume(3, 2);
    write("r3-vol.json", r3.to_json())?;
    write("r4-vol.json", MssSpace::volume(4, 2).to_json())?;
    write("r2-symplectic.json", MssSpace::symplectic_plane(2).to_json())?;

    let so3 = so_n_action(3);
    let fields: serde_json::Map<String, serde_json::Value> = so3
        .algebra()
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), so3.field(i).to_json()))
        .collect();
    write(
        "so3-action.json",
        serde_json::json!({
            "algebra": so3.algebra().to_json(),
            "fields": fields,
        }),
    )?;

    // the rotation-invariant potential of the volume, and the gauge form
    let potential = iota(&PolyField::euler(3), r3.omega()).scale(&Rat::new(1, 3));
    write("so3-potential.json", potential.to_json())?;
    write("gauge-b.json", iota(&PolyField::euler(3), r3.omega()).to_json())?;
    println!("fixtures written to {}", root.display());
    Ok(())
}
