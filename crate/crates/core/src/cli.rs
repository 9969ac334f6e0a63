//! Command-line front end. Every report is one JSON object per line with
//! sorted keys, except `enumerate`, `selfam greedy` and `selfam min`, which
//! print plain text.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::adversary::run_adversary;
use crate::c2::{enumerate_c2, C2Params, C2Spec};
use crate::error::{Error, Result};
use crate::protocol::resolve;
use crate::prune::run_prune;
use crate::radio::{self, completion_round, Action, Message, Observation, Trace};
use crate::reductions::{ladder, make_advice};
use crate::selective::{self, SetFamily};

#[derive(Debug, Parser)]
#[command(name = "radiolb", about = "Broadcast lower-bound toolkit for layered radio networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a protocol on one network.
    Simulate {
        /// `c2:m=..,k=..,taus=..` or a file holding that string.
        #[arg(long)]
        net: String,
        #[arg(long)]
        protocol: String,
        #[arg(long)]
        rounds: u64,
        /// Write a per-round JSONL trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// List every network of the family.
    Enumerate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// Run a transformed protocol; `rounds` counts original rounds.
    Transform {
        #[arg(long)]
        protocol: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        stage: u8,
        #[arg(long)]
        net: String,
        #[arg(long)]
        rounds: u64,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Prune the family under the lifted protocol.
    Prune {
        #[arg(long)]
        protocol: String,
        #[arg(long)]
        rounds: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// Search for a network the protocol cannot finish within the budget.
    Adversary {
        #[arg(long)]
        protocol: String,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// Selective-family tools.
    Selfam {
        #[command(subcommand)]
        action: Selfam,
    },
}

#[derive(Debug, Subcommand)]
pub enum Selfam {
    /// Check a family file for (n, k)-selectivity
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        family: PathBuf,
    },
    /// Build a selective family greedily
    Greedy {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Exact minimum size of a selective family (small n only)
    Min {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Asymptotic size bound and the derived round bound
    Bound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
    },
}

/// Parses `args` (program name first), writes the report to `out` and
/// diagnostics to `err`, and returns the exit code: 0 success, 1 domain
/// error, 2 usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn load_net(arg: &str) -> Result<C2Spec> {
    if arg.starts_with("c2:") {
        return arg.parse();
    }
    fs::read_to_string(arg)?.trim().parse()
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{v}")?;
    Ok(())
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Simulate {
            net,
            protocol,
            rounds,
            trace,
        } => {
            let spec = load_net(&net)?;
            let proto = resolve(&protocol, spec.params)?;
            let network = spec.build()?;
            let t = radio::run(&network, &*proto, rounds)?;
            if let Some(path) = trace {
                write_trace(&path, &t)?;
            }
            emit(
                out,
                &json!({
                    "completion": completion_round(&t),
                    "informed": informed_json(&t),
                    "network": spec.to_string(),
                    "protocol": proto.name(),
                    "rounds": rounds,
                }),
            )
        }
        Command::Enumerate { m, k } => {
            let params = C2Params::new(m, k)?;
            for tv in enumerate_c2(params)? {
                writeln!(out, "{}", C2Spec::new(params, tv)?)?;
            }
            Ok(())
        }
        Command::Transform {
            protocol,
            stage,
            net,
            rounds,
            trace,
        } => {
            let spec = load_net(&net)?;
            let network = spec.build()?;
            let chain = ladder(resolve(&protocol, spec.params)?)?;
            let proto = &chain[stage as usize];
            let total = 3 * rounds;
            let t = radio::run(&network, &**proto, total)?;
            if let Some(path) = trace {
                write_trace(&path, &t)?;
            }
            let mut report = json!({
                "completion": completion_round(&t),
                "network": spec.to_string(),
                "protocol": proto.name(),
                "rounds": total,
                "stage": stage,
            });
            if stage == 4 {
                report["advice"] = json!(make_advice(&*chain[3], &network, rounds.max(1))?.to_string());
            }
            emit(out, &report)
        }
        Command::Prune { protocol, rounds, m, k } => {
            let params = C2Params::new(m, k)?;
            let chain = ladder(resolve(&protocol, params)?)?;
            let res = run_prune(&*chain[3], rounds, params)?;
            emit(
                out,
                &json!({
                    "advice": res.advice.to_string(),
                    "base_net": C2Spec::new(params, res.base_net.clone())?.to_string(),
                    "events": res.event_seq.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                    "free_component": res.free_component,
                    "marked": res.marked,
                    "protocol": chain[0].name(),
                    "rounds": rounds,
                    "survivors": res.survivors.len(),
                }),
            )
        }
        Command::Adversary { protocol, budget, m, k } => {
            let params = C2Params::new(m, k)?;
            let p0 = resolve(&protocol, params)?;
            let name = p0.name();
            let rep = run_adversary(p0, budget, params)?;
            match rep.witness {
                None => {
                    writeln!(out, "none")?;
                    Ok(())
                }
                Some(w) => emit(
                    out,
                    &json!({
                        "budget": w.budget,
                        "component": w.component,
                        "family": rep.family.map(|f| f.as_set_family(k).to_string()),
                        "marked": rep.prune.marked,
                        "network": C2Spec::new(params, w.network)?.to_string(),
                        "protocol": name,
                        "unhit_z": w.unhit_z,
                        "verified": w.verified,
                    }),
                ),
            }
        }
        Command::Selfam { action } => selfam(action, out),
    }
}

fn selfam(action: Selfam, out: &mut dyn Write) -> Result<()> {
    match action {
        Selfam::Verify { n, k, family } => {
            let fam: SetFamily = fs::read_to_string(&family)?.parse()?;
            let verdict = selective::is_selective(&fam, n, k)?;
            let unhit = match &verdict {
                selective::Selectivity::Unhit(z) => Some(z.clone()),
                selective::Selectivity::Selective => None,
            };
            emit(
                out,
                &json!({ "k": k, "n": n, "selective": verdict.holds(), "size": fam.len(), "unhit": unhit }),
            )
        }
        Selfam::Greedy { n, k } => {
            write!(out, "{}", selective::greedy_selective(n, k)?)?;
            Ok(())
        }
        Selfam::Min { n, k } => {
            writeln!(out, "{}", selective::min_selective_size(n, k)?)?;
            Ok(())
        }
        Selfam::Bound { n, k } => {
            let b = selective::size_bound(n, k);
            emit(
                out,
                &json!({
                    "global_round_bound": selective::global_round_bound(n),
                    "in_range": b.in_range,
                    "k": k,
                    "n": n,
                    "value": b.value,
                }),
            )
        }
    }
}

fn informed_json(t: &Trace<'_>) -> Value {
    let map: serde_json::Map<String, Value> = t.informed.iter().map(|(l, r)| (l.0.to_string(), json!(r))).collect();
    Value::Object(map)
}

fn message_json(m: &Message) -> Vec<Value> {
    let mut v = vec![json!(m.tag())];
    match m {
        Message::Payload { data, advice } => {
            v.push(json!(hex::encode(data)));
            v.push(json!(advice.as_ref().map(|a| a.to_string())));
        }
        Message::ComponentDesc(d) => {
            v.push(json!(d.component));
            v.push(json!(d.tau));
        }
        Message::Relay { from, inner } => {
            v.push(json!(from.0));
            v.push(Value::Array(message_json(inner)));
        }
        Message::Opaque(bytes) => v.push(json!(hex::encode(bytes))),
    }
    v
}

/// One line per round: `tx` lists `[label, tag, fields..]`, `rx` lists
/// `[label, from, tag]`.
pub fn trace_lines(t: &Trace<'_>) -> Vec<String> {
    t.rounds
        .iter()
        .map(|rec| {
            let tx: Vec<Value> = rec
                .actions
                .iter()
                .filter_map(|(l, a)| match a {
                    Action::Transmit(m) => {
                        let mut row = vec![json!(l.0)];
                        row.extend(message_json(m));
                        Some(Value::Array(row))
                    }
                    _ => None,
                })
                .collect();
            let rx: Vec<Value> = rec
                .deliveries
                .iter()
                .filter_map(|(l, o)| match o {
                    Observation::Received { from, msg } => Some(json!([l.0, from.0, msg.tag()])),
                    Observation::Phi => None,
                })
                .collect();
            let collided: Vec<u32> = rec.collided.iter().map(|l| l.0).collect();
            json!({ "collided": collided, "round": rec.round, "rx": rx, "tx": tx }).to_string()
        })
        .collect()
}

fn write_trace(path: &Path, t: &Trace<'_>) -> Result<()> {
    let mut text = trace_lines(t).join("\n");
    if !text.is_empty() {
        text.push('\n');
    }
    fs::write(path, text).map_err(Error::from)
}
