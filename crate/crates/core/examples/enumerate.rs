//! Every network of a small C2 family and how round-robin fares on each.

use radiolb::{build_c2, completion_round, enumerate_c2, round_robin, run, C2Params, C2Spec};

fn main() -> radiolb::Result<()> {
    let params = C2Params::new(2, 2)?;
    let rr = round_robin();
    for tv in enumerate_c2(params)? {
        let net = build_c2(params, &tv)?;
        let c = completion_round(&run(&net, &*rr, 8)?);
        println!(
            "{}  edges={}  completion={c:?}",
            C2Spec::new(params, tv)?,
            net.edge_count()
        );
    }
    Ok(())
}
