//! The documented generic structure function has one line broken across a
//! page, which admits two readings: a plain sum of terms (reading A) or a
//! product joining the two halves (reading B). This example rebuilds the
//! generic form under both readings for each system and tests it against
//! the factored closed form; only reading B reconciles.

use specgen::repfinder::{find_representations, reconcile_generic, ReconcileOutcome, SolveOptions};
use specgen::{Charges, Reading, SystemId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        (
            SystemId::Micz3d,
            Charges::parse(&[("m", 0.5), ("s", 0.5), ("c1", 0.0), ("c2", 0.0)]),
        ),
        (
            SystemId::Osc4d,
            Charges::parse(&[
                ("m", 0.0),
                ("s", 0.0),
                ("c1", 0.0),
                ("c2", 0.0),
                ("omega", 1.0),
            ]),
        ),
        (
            SystemId::MiczS3,
            Charges::parse(&[("m", 0.0), ("mu", 0.0), ("alpha", 0.0), ("R", 1.0)]),
        ),
    ];
    for (system, charges) in cases {
        let reps = find_representations(system, &charges, 1, &SolveOptions::default())?;
        let rep = reps.iter().find(|r| r.accepted()).expect("accepted module");
        println!("{system} (p = 1, E = {:.6}):", rep.e);
        for reading in [Reading::A, Reading::B] {
            match reconcile_generic(system, rep, reading)? {
                ReconcileOutcome::Proportional { constant } => {
                    println!("  reading {reading}: proportional, constant {constant:.6}");
                }
                ReconcileOutcome::Discrepant(record) => {
                    println!("  reading {reading}: discrepant ({})", record.note);
                }
            }
        }
    }
    Ok(())
}
