//! Writing a protocol as a function of the node's context, and checking it
//! against the spontaneity rule.

use radiolb::protocol::check_legality;
use radiolb::{completion_round, run, Action, C2Spec, FnProtocol, Message};

fn main() -> radiolb::Result<()> {
    // informed nodes relay once, in the round after they heard the payload;
    // on this network two wired L1 nodes collide at the L2 node
    let echo = FnProtocol::new("relay-once", |ctx| {
        if ctx.own_label.is_source() {
            return if ctx.round == 0 {
                Action::Transmit(Message::payload())
            } else {
                Action::Listen
            };
        }
        match ctx.history.last() {
            Some(o) if o.message().is_some_and(Message::is_payload) => Action::Transmit(Message::payload()),
            _ => Action::Listen,
        }
    });
    let spontaneous = FnProtocol::new("spontaneous", |ctx| {
        if ctx.round == 2 {
            Action::Transmit(Message::Opaque(vec![0]))
        } else {
            Action::Listen
        }
    });

    let net: C2Spec = "c2:m=1,k=3,taus=5".parse()?;
    let net = net.build()?;
    for proto in [&echo, &spontaneous] {
        let violations = check_legality(proto, &net, 4)?;
        if !violations.is_empty() {
            println!("{:<12} illegal: {violations:?}", proto_name(proto));
            continue;
        }
        let c = completion_round(&run(&net, proto, 4)?);
        println!("{:<12} completion={c:?}", proto_name(proto));
    }
    Ok(())
}

fn proto_name(p: &FnProtocol) -> String {
    radiolb::Protocol::name(p)
}
