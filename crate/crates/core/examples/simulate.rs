//! Round-robin on one C2 network, printed round by round.
//!
//! ```text
//! cargo run --example simulate -- c2:m=2,k=2,taus=3,1 6
//! ```

use radiolb::{completion_round, round_robin, run, C2Spec, Observation};

fn main() -> radiolb::Result<()> {
    let mut args = std::env::args().skip(1);
    let spec: C2Spec = args.next().as_deref().unwrap_or("c2:m=2,k=2,taus=3,1").parse()?;
    let rounds = args.next().map_or(Ok(6), |r| r.parse()).unwrap_or(6);

    let net = spec.build()?;
    let trace = run(&net, &*round_robin(), rounds)?;
    for rec in &trace.rounds {
        let tx: Vec<String> = rec.transmitters().map(|(l, _)| l.to_string()).collect();
        let rx: Vec<String> = rec
            .deliveries
            .iter()
            .filter_map(|(l, o)| match o {
                Observation::Received { from, .. } => Some(format!("{from}->{l}")),
                Observation::Phi => None,
            })
            .collect();
        println!("round {:>2}  tx [{}]  rx [{}]", rec.round, tx.join(" "), rx.join(" "));
    }
    match completion_round(&trace) {
        Some(c) => println!("{spec}: complete after {c} rounds"),
        None => println!("{spec}: incomplete after {rounds} rounds"),
    }
    Ok(())
}
