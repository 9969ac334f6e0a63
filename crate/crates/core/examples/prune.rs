//! Pruning a family down to the networks that share one advice string.

use radiolb::{ladder, round_robin, run_prune, C2Params};

fn main() -> radiolb::Result<()> {
    let params = C2Params::new(3, 2)?;
    let p3 = ladder(round_robin())?[3].clone();
    for r in 1..=4 {
        let res = run_prune(&*p3, r, params)?;
        let events: Vec<String> = res.event_seq.iter().map(ToString::to_string).collect();
        println!(
            "r={r}  survivors={:>2}  events=[{}]  {}  base={}  marked={:?}  free={:?}",
            res.survivors.len(),
            events.join(","),
            res.advice,
            res.base_net,
            res.marked,
            res.free_component,
        );
    }
    Ok(())
}
