//! Recorded verdicts for every committed scenario. Set `UPDATE_SNAPSHOTS=1`
//! to rewrite them.

mod common;

use std::path::PathBuf;

use gpmult_core::verifier::{run_all, Status, Suite};
use serde_json::Value;

const ALL: [&str; 8] = [
    "a_edgeless_z2",
    "b_tensor_z2_z3",
    "c_triangle_points",
    "d_path_mixed",
    "e_star_k12",
    "f_block_swaps",
    "sabotage_edge_violation",
    "sabotage_not_pd",
];

fn snapshot_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/snapshots").join(format!("{name}.json"))
}

fn verdict(name: &str) -> Value {
    let loaded = common::load(name);
    let report = run_all(&loaded.scenario, Suite::All).unwrap();
    let mut v = loaded.report_json(&report);
    v.as_object_mut().unwrap().remove("run");
    v
}

#[test]
fn verdicts_match_snapshots() {
    let update = std::env::var_os("UPDATE_SNAPSHOTS").is_some();
    for name in ALL {
        let got = verdict(name);
        let p = snapshot_path(name);
        if update {
            std::fs::create_dir_all(p.parent().unwrap()).unwrap();
            std::fs::write(&p, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
            continue;
        }
        let want: Value = serde_json::from_str(&std::fs::read_to_string(&p).expect("snapshot exists")).unwrap();
        if let Err(diff) = common::json_close(&got, &want, 1e-10, "") {
            panic!("{name} differs from its snapshot at {diff}");
        }
    }
}

fn statuses(name: &str) -> Vec<(String, Status)> {
    let loaded = common::load(name);
    run_all(&loaded.scenario, Suite::All)
        .unwrap()
        .checks
        .into_iter()
        .map(|c| (c.name.to_string(), c.outcome.status))
        .collect()
}

#[test]
fn golden_scenarios_have_no_failures() {
    for name in common::MAIN_SCENARIOS {
        for (check, status) in statuses(name) {
            assert_ne!(status, Status::Fail, "{name}: {check}");
        }
    }
}

#[test]
fn edge_violation_fails_only_the_setup_checks() {
    for (check, status) in statuses("sabotage_edge_violation") {
        let want = if check == "setup" || check == "well_defined" { Status::Fail } else { Status::Skipped };
        assert_eq!(status, want, "{check}");
    }
}

#[test]
fn non_pd_vertex_fails_only_the_main_theorem() {
    for (check, status) in statuses("sabotage_not_pd") {
        match check.as_str() {
            "main_theorem" => assert_eq!(status, Status::Fail),
            _ => assert_ne!(status, Status::Fail, "{check}"),
        }
    }
}
