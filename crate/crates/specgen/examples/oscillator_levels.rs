//! Solves the four-dimensional singular oscillator for several frequencies
//! and effective indices, showing the equidistant level structure
//! E = 2 omega (p + 1 + (m1 + m2)/2).

use specgen::repfinder::{find_representations, SolveOptions};
use specgen::{Charges, SystemId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = SolveOptions::default();
    for omega in [0.5, 1.0, 2.0] {
        let charges = Charges::parse(&[
            ("m", 0.5),
            ("s", 0.5),
            ("c1", 0.0),
            ("c2", 0.0),
            ("omega", omega),
        ]);
        // m1 = |m+s| = 1 and m2 = |m-s| = 0 at zero inverse-square strength.
        println!("omega = {omega}");
        let mut previous = None;
        for p in 0..=4 {
            let reps = find_representations(SystemId::Osc4d, &charges, p, &opts)?;
            let rep = reps
                .iter()
                .find(|r| r.accepted())
                .expect("one accepted module per p");
            let expect = 2.0 * omega * ((p + 1) as f64 + 0.5);
            assert!((rep.e - expect).abs() < 1e-10);
            let gap = previous.map(|e| rep.e - e);
            previous = Some(rep.e);
            match gap {
                Some(gap) => println!("  p = {p}: E = {:>8.4}   gap = {:.4}", rep.e, gap),
                None => println!("  p = {p}: E = {:>8.4}", rep.e),
            }
        }
        println!("  level spacing is 2 omega = {}\n", 2.0 * omega);
    }
    Ok(())
}
