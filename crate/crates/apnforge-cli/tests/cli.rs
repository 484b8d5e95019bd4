//! End-to-end checks of the binary: JSON report shape, exit codes, bulk
//! file outputs, and the APNFORGE_MODULI override.

use std::process::{Command, Output};

fn apnforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apnforge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON: {e}\n{}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn find_mu_reports_and_is_deterministic() {
    let a = apnforge(&["find-mu", "--m", "3", "--s", "1"]);
    assert!(a.status.success());
    let b = apnforge(&["find-mu", "--m", "3", "--s", "1"]);
    let mut ja = json_of(&a);
    let mut jb = json_of(&b);
    assert_eq!(ja["schema"], 1);
    assert_eq!(ja["status"], "pass");
    assert_eq!(ja["results"]["provenance"], "exhaustive");
    assert!(ja["results"]["mu_hex"].is_string());
    // byte-identical modulo elapsed
    ja["elapsed"] = serde_json::json!(0);
    jb["elapsed"] = serde_json::json!(0);
    assert_eq!(ja, jb);
}

#[test]
fn find_mu_table1_hit_and_miss() {
    let hit = apnforge(&["find-mu", "--m", "3", "--s", "2", "--strategy", "table1"]);
    assert!(hit.status.success());
    assert_eq!(json_of(&hit)["results"]["provenance"], "table1+remark");

    let miss = apnforge(&["find-mu", "--m", "4", "--s", "3", "--strategy", "table1"]);
    assert_eq!(miss.status.code(), Some(1));
    assert_eq!(json_of(&miss)["status"], "partial");
}

#[test]
fn census_writes_csv() {
    let dir = std::env::temp_dir().join("apnforge-cli-test-census");
    std::fs::create_dir_all(&dir).unwrap();
    let csv_path = dir.join("census31.csv");
    let out = apnforge(&[
        "census",
        "--m",
        "3",
        "--s",
        "1",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report = json_of(&out);
    assert_eq!(report["status"], "pass");
    assert_eq!(report["results"]["total"][0], 145);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("alpha_hex,n0,n1,n2,n3\n"));
    assert!(csv.trim_end().ends_with("TOTAL,145,301,63,3"));
    assert_eq!(csv.lines().count(), 1 + 8 + 1); // header, 8 classes, total
}

#[test]
fn apn_single_v_and_all() {
    let mu = json_of(&apnforge(&["find-mu", "--m", "3", "--s", "1"]))["results"]["mu_hex"]
        .as_str()
        .unwrap()
        .to_string();
    let single = apnforge(&["apn", "--m", "3", "--s", "1", "--mu", &mu, "--v", "1"]);
    assert!(single.status.success());
    let report = json_of(&single);
    assert_eq!(report["results"]["delta"], 2);
    assert_eq!(report["results"]["claim_apn"], true);

    let dir = std::env::temp_dir().join("apnforge-cli-test-apn");
    std::fs::create_dir_all(&dir).unwrap();
    let table_path = dir.join("candidate.bin");
    let all = apnforge(&[
        "apn",
        "--m",
        "3",
        "--s",
        "1",
        "--mu",
        &mu,
        "--out",
        table_path.to_str().unwrap(),
    ]);
    assert!(all.status.success());
    let report = json_of(&all);
    assert_eq!(report["results"]["family"]["all_apn"], true);
    assert_eq!(
        report["results"]["family"]["per_v"]
            .as_array()
            .unwrap()
            .len(),
        7
    );
    // the exported table of the last swept v: header plus 2^9 words
    let bytes = std::fs::read(&table_path).unwrap();
    assert_eq!(bytes.len(), 16 + 512 * 8);
    assert_eq!(&bytes[0..4], b"APN1");
}

#[test]
fn apn_usage_errors_exit_two() {
    let bad_hex = apnforge(&["apn", "--m", "3", "--s", "1", "--mu", "zz"]);
    assert_eq!(bad_hex.status.code(), Some(2));
    let out_of_field = apnforge(&["apn", "--m", "3", "--s", "1", "--mu", "fffff"]);
    assert_eq!(out_of_field.status.code(), Some(2));
    let bad_v = apnforge(&["apn", "--m", "3", "--s", "1", "--mu", "d", "--v", "3"]);
    // 3 encodes an element outside F_{2^3} (not Frobenius-fixed): usage
    assert_eq!(bad_v.status.code(), Some(2));
    let unknown_flag = apnforge(&["apn", "--bogus"]);
    assert_eq!(unknown_flag.status.code(), Some(2));
}

#[test]
fn bound_reports_threshold_band() {
    let out = apnforge(&["bound", "--d", "1248", "--dim", "3"]);
    assert!(out.status.success());
    let report = json_of(&out);
    let m_star = report["results"]["m_star"].as_u64().unwrap();
    assert!((46..=48).contains(&m_star));
    assert_eq!(report["results"]["rows"].as_array().unwrap().len(), 96);
}

#[test]
fn moduli_dump_and_env_override() {
    let dir = std::env::temp_dir().join("apnforge-cli-test-moduli");
    std::fs::create_dir_all(&dir).unwrap();
    let table_path = dir.join("moduli.tsv");
    let out = apnforge(&[
        "field",
        "--dump-moduli",
        "--out",
        table_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let table = std::fs::read_to_string(&table_path).unwrap();
    assert_eq!(table.lines().count(), 48);
    assert!(table.lines().next().unwrap().starts_with("1\t"));

    // an alternative (valid, non-canonical) modulus for degree 9
    let alt = dir.join("alt.tsv");
    std::fs::write(&alt, "9\t211\n").unwrap();
    let ok = Command::new(env!("CARGO_BIN_EXE_apnforge"))
        .args(["find-mu", "--m", "3", "--s", "1"])
        .env("APNFORGE_MODULI", alt.to_str().unwrap())
        .output()
        .unwrap();
    assert!(
        ok.status.success(),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );

    // a reducible entry must be rejected as a usage error
    let bad = dir.join("bad.tsv");
    std::fs::write(&bad, "9\t200\n").unwrap(); // x^9 + ... even polynomial, reducible
    let rejected = Command::new(env!("CARGO_BIN_EXE_apnforge"))
        .args(["find-mu", "--m", "3", "--s", "1"])
        .env("APNFORGE_MODULI", bad.to_str().unwrap())
        .output()
        .unwrap();
    assert_eq!(rejected.status.code(), Some(2));
}

#[test]
fn appendix_passes() {
    let out = apnforge(&["appendix"]);
    assert!(out.status.success());
    let report = json_of(&out);
    assert_eq!(report["results"]["appendix"]["pass"], true);
    assert_eq!(report["results"]["h2_low_degree_factor_free"], true);
}

#[test]
fn selftest_quick_passes() {
    let out = apnforge(&["selftest", "--level", "quick"]);
    assert!(out.status.success());
    let report = json_of(&out);
    let items = report["results"]["items"].as_array().unwrap();
    assert!(items.len() >= 12);
    assert!(items.iter().all(|i| i["pass"] == true));
}
