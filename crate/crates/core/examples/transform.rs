//! A protocol lifted through the four transformations, stage by stage.
//!
//! Every stage stretches a round into three, and the source says less and
//! less: from arbitrary messages, to echoes, to component descriptions, to a
//! single advice string up front.

use radiolb::protocol::resolve;
use radiolb::{completion_round, ladder, make_advice, run, C2Spec};

fn main() -> radiolb::Result<()> {
    let mut args = std::env::args().skip(1);
    let spec: C2Spec = args.next().as_deref().unwrap_or("c2:m=2,k=3,taus=6,3").parse()?;
    let name = args.next().unwrap_or_else(|| "round-robin".into());
    let net = spec.build()?;
    let chain = ladder(resolve(&name, spec.params)?)?;

    let r = (spec.params.m * spec.params.k) as u64 + 2;
    for (s, proto) in chain.iter().enumerate() {
        let rounds = if s == 0 { r } else { 3 * r };
        let c = completion_round(&run(&net, &**proto, rounds)?);
        println!("stage {s}  {:<40} completion={c:?}", proto.name());
    }
    println!("advice: {}", make_advice(&*chain[3], &net, r)?);
    Ok(())
}
