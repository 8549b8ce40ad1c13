//! Operating characteristics of the three interim policies over six scenarios.
//!
//! `cargo run --release -p ppmon-core --example table1 [n_sims] [seed]`

use ppmon_core::trialsim::operating_characteristics;
use ppmon_core::{Policy, ScenarioTruth, TrialDesign};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n_sims: u64 = args
        .next()
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(10_000);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2024);

    let design = TrialDesign::default();
    let scenarios = [
        (0.7, 0.4),
        (0.7, 0.5),
        (0.7, 0.6),
        (0.4, 0.2),
        (0.3, 0.2),
        (0.2, 0.2),
    ];
    println!("scenario  br   bor  policy        pet     prn     ass      asd");
    for (i, &(br, bor)) in scenarios.iter().enumerate() {
        let truth = ScenarioTruth::new(br, bor, 0.5)?;
        for policy in Policy::ALL {
            let oc = operating_characteristics(&design, &truth, policy, n_sims, seed)?;
            println!(
                "{:<9} {:<4} {:<4} {:<12} {:.4}  {:.4}  {:>7.4} {:>9.4}",
                i + 1,
                br,
                bor,
                policy,
                oc.pet,
                oc.prn,
                oc.ass,
                oc.asd
            );
        }
    }
    Ok(())
}
