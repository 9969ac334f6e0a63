//! Builds networks that round-robin and a selective-family protocol cannot
//! finish within a budget, and confirms each by direct simulation.

use radiolb::adversary::run_adversary;
use radiolb::{round_robin, selfam_driven, C2Params, C2Spec, SetFamily};

fn main() -> radiolb::Result<()> {
    let params = C2Params::new(3, 3)?;
    let protocols = [round_robin(), selfam_driven(params, SetFamily::singletons(3))?];
    for p0 in protocols {
        for budget in 1..=4 {
            let name = p0.name();
            match run_adversary(p0.clone(), budget, params) {
                Ok(rep) => match rep.witness {
                    Some(w) => println!(
                        "{name:<24} r={budget}: fails on {} (Z={:?}, verified={})",
                        C2Spec::new(params, w.network)?,
                        w.unhit_z,
                        w.verified
                    ),
                    None => {
                        let f = rep.family.expect("free component when no witness");
                        println!(
                            "{name:<24} r={budget}: survives; derived family {}",
                            f.as_set_family(params.k).describe()
                        );
                    }
                },
                Err(e) => println!("{name:<24} r={budget}: {e}"),
            }
        }
    }
    Ok(())
}
