use std::process::{Command, Output};

fn radiolb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radiolb")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = radiolb(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn simulate_report() {
    assert_eq!(
        stdout(&["simulate", "--net", "c2:m=1,k=1,taus=1", "--protocol", "round-robin", "--rounds", "3"]),
        "{\"completion\":2,\"informed\":{\"0\":0,\"1\":0,\"2\":1},\"network\":\"c2:m=1,k=1,taus=1\",\"protocol\":\"round-robin\",\"rounds\":3}\n"
    );
}

#[test]
fn net_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.txt");
    std::fs::write(&path, "c2:m=1,k=2,taus=2\n").unwrap();
    let out = stdout(&[
        "simulate",
        "--net",
        path.to_str().unwrap(),
        "--protocol",
        "silent",
        "--rounds",
        "4",
    ]);
    assert!(out.starts_with("{\"completion\":null,"));
}

#[test]
fn prune_report() {
    assert_eq!(
        stdout(&[
            "prune",
            "--protocol",
            "round-robin",
            "--rounds",
            "3",
            "--m",
            "2",
            "--k",
            "2"
        ]),
        "{\"advice\":\"adv:phi,<0:1>\",\"base_net\":\"c2:m=2,k=2,taus=1,1\",\"events\":[\"silent\",\"<0:1>\"],\
         \"free_component\":1,\"marked\":[0],\"protocol\":\"round-robin\",\"rounds\":3,\"survivors\":3}\n"
    );
}

#[test]
fn adversary_reports() {
    let w = stdout(&[
        "adversary",
        "--protocol",
        "round-robin",
        "--budget",
        "1",
        "--m",
        "2",
        "--k",
        "4",
    ]);
    let v: serde_json::Value = serde_json::from_str(&w).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["network"], "c2:m=2,k=4,taus=1,1");
    assert_eq!(v["unhit_z"], serde_json::json!([0]));
    assert_eq!(
        stdout(&[
            "adversary",
            "--protocol",
            "round-robin",
            "--budget",
            "6",
            "--m",
            "2",
            "--k",
            "2"
        ]),
        "none\n"
    );
}

#[test]
fn selfam_commands() {
    assert_eq!(stdout(&["selfam", "min", "--n", "2", "--k", "2"]), "2\n");
    assert_eq!(stdout(&["selfam", "greedy", "--n", "2", "--k", "2"]), "n=2\n0\n1\n");
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("f.txt");
    std::fs::write(&fam, "n=2\n0,1\n").unwrap();
    assert_eq!(
        stdout(&[
            "selfam",
            "verify",
            "--n",
            "2",
            "--k",
            "2",
            "--family",
            fam.to_str().unwrap()
        ]),
        "{\"k\":2,\"n\":2,\"selective\":false,\"size\":1,\"unhit\":[0,1]}\n"
    );
    assert_eq!(
        stdout(&["selfam", "bound", "--n", "128", "--k", "2"]),
        "{\"global_round_bound\":1,\"in_range\":true,\"k\":2,\"n\":128,\"value\":0.5}\n"
    );
}

#[test]
fn transform_stage_four_prints_advice() {
    assert_eq!(
        stdout(&[
            "transform",
            "--protocol",
            "round-robin",
            "--stage",
            "4",
            "--net",
            "c2:m=1,k=2,taus=3",
            "--rounds",
            "3"
        ]),
        "{\"advice\":\"adv:phi,<0:3>\",\"completion\":5,\"network\":\"c2:m=1,k=2,taus=3\",\
         \"protocol\":\"pi4(pi3(pi2(pi1(round-robin))))\",\"rounds\":9,\"stage\":4}\n"
    );
}

#[test]
fn trace_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.jsonl");
    stdout(&[
        "simulate",
        "--net",
        "c2:m=1,k=2,taus=3",
        "--protocol",
        "round-robin",
        "--rounds",
        "3",
        "--trace",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "{\"collided\":[],\"round\":0,\"rx\":[[1,0,\"mu\"],[2,0,\"mu\"]],\"tx\":[[0,\"mu\",\"6d75\",null]]}\n\
         {\"collided\":[],\"round\":1,\"rx\":[[0,1,\"mu\"],[3,1,\"mu\"]],\"tx\":[[1,\"mu\",\"6d75\",null]]}\n\
         {\"collided\":[],\"round\":2,\"rx\":[[0,2,\"mu\"],[3,2,\"mu\"]],\"tx\":[[2,\"mu\",\"6d75\",null]]}\n"
    );
}

#[test]
fn exit_codes() {
    assert_eq!(radiolb(&[]).status.code(), Some(2));
    assert_eq!(radiolb(&["selfam", "min", "--n", "2"]).status.code(), Some(2));
    assert_eq!(radiolb(&["enumerate", "--m", "0", "--k", "2"]).status.code(), Some(1));
    assert_eq!(
        radiolb(&["selfam", "min", "--n", "6", "--k", "2"]).status.code(),
        Some(1)
    );
    let capped = Command::new(env!("CARGO_BIN_EXE_radiolb"))
        .args(["enumerate", "--m", "2", "--k", "3"])
        .env("RADIOLB_ENUM_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("exceeds the cap of 10"));
}
