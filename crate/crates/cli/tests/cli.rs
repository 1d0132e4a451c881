use std::fs;
use std::process::Command;

use apnforge_cli::commands::{self, VerifyArgs};
use apnforge_cli::{Exit, Format, RunConfig};
use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_apnforge"));
    cmd.env_remove("APNFORGE_MODULUS_TABLE");
    cmd
}

fn parse(body: &str) -> Value {
    serde_json::from_str(body).expect("valid json report")
}

#[test]
fn default_sweep_agrees_everywhere() {
    let out = commands::sweep(&RunConfig::default()).unwrap();
    assert_eq!(out.exit, Exit::Ok);
    let v = parse(&out.body);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["all_agree"], true);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 72);
    for row in rows {
        assert_eq!(row["predicate"], row["exists_c"]);
        let (m, n) = (row["m"].as_u64().unwrap(), row["n"].as_u64().unwrap());
        if m == 1 || m == n {
            assert_eq!(row["exists_c"], false, "({m},{n})");
        }
        assert_eq!(
            row["found_c_hex"].as_str().unwrap().is_empty(),
            row["exists_c"] == false
        );
        assert_eq!(row["search_size"].as_u64().unwrap(), 1 << (2 * m));
    }
}

#[test]
fn sweep_r_equals_two_rows() {
    let cfg = RunConfig {
        m_range: 1..=1,
        n_range: 1..=4,
        format: Some(Format::Csv),
        ..RunConfig::default()
    };
    let out = commands::sweep(&cfg).unwrap();
    assert_eq!(out.exit, Exit::Ok);
    let mut lines = out.body.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m,n,predicate,exists_c,found_c_hex,modulus_hex,search_size,compatible_count"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.contains(",false,false,,7,4,0")));
}

#[test]
fn sweep_output_is_deterministic() {
    let run = || {
        bin()
            .args(["sweep", "--m-range", "2..4", "--n-range", "1..5"])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_default_choices() {
    let cfg = RunConfig::default();
    let cases = [
        (2, 1, "search", 2, true),
        (1, 2, "any-c", 2, true),
        (3, 3, "any-c", 8, false),
    ];
    for (m, n, source, t, apn) in cases {
        let out = commands::verify(
            &cfg,
            &VerifyArgs {
                m,
                n,
                samples: 200,
                ..VerifyArgs::default()
            },
        )
        .unwrap();
        assert_eq!(out.exit, Exit::Ok, "({m},{n})");
        let v = parse(&out.body);
        assert_eq!(v["status"], "ok");
        assert_eq!(v["c_source"], source);
        assert_eq!(v["expected_fiber_size"], t);
        assert_eq!(v["kernel_sizes"], serde_json::json!([t]));
        assert_eq!(v["verdicts"]["is_apn"], apn);
        assert_eq!(v["verdicts"]["is_2k_to_one"], true);
        assert_eq!(v["spot_check"]["mismatches"], 0);
    }
}

#[test]
fn verify_with_explicit_values() {
    let cfg = RunConfig::default();
    // d = 1 lies in GF(4)
    let err = commands::verify(
        &cfg,
        &VerifyArgs {
            m: 2,
            n: 1,
            c: Some("9".into()),
            d: Some("1".into()),
            ..VerifyArgs::default()
        },
    )
    .unwrap_err();
    assert_eq!(err.exit(), Exit::Usage);

    // c = 0 is never compatible; the outcome is recorded either way
    let out = commands::verify(
        &cfg,
        &VerifyArgs {
            m: 2,
            n: 1,
            c: Some("0".into()),
            ..VerifyArgs::default()
        },
    )
    .unwrap();
    let v = parse(&out.body);
    assert_eq!(v["c_source"], "given");
    let ok = v["verdicts"]["is_2k_to_one"].as_bool().unwrap();
    assert_eq!(out.exit == Exit::Ok, ok);
}

#[test]
fn verify_respects_spectrum_cap() {
    let out = bin()
        .args(["verify", "--m", "3", "--n", "1", "--cap-spectrum", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_writes_ddt() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ddt.csv");
    let out = bin()
        .args(["verify", "--m", "2", "--n", "1", "--ddt"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 16);
    assert!(rows[0].starts_with("16,0"));
    for row in &rows[1..] {
        let cells: Vec<u32> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells.len(), 16);
        assert_eq!(cells.iter().sum::<u32>(), 16);
        assert!(cells.iter().all(|&c| c == 0 || c == 2));
    }
}

#[test]
fn witness_table() {
    let cfg = RunConfig {
        format: Some(Format::Json),
        ..RunConfig::default()
    };
    // (m, n) = (3, 2): r+1 = 9 divides neither s+1 = 5 nor s-1 = 3
    let field = cfg.field(6).unwrap();
    let ctx = apnforge::CompatContext::with_field(field.clone(), 3, 2).unwrap();
    let primitive = ctx.primitive_circle_elements();
    assert!(!primitive.is_empty());
    for y in primitive {
        let out = commands::witness(&cfg, 3, 2, &field.format_element(y)).unwrap();
        assert_eq!(out.exit, Exit::Ok);
        let v = parse(&out.body);
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r["vanishes"] == true));
        assert_eq!(rows[0]["role"], "c0");
        assert_eq!(rows[0]["in_subfield_r"], true);
    }

    let text = bin()
        .args(["witness", "--m", "3", "--n", "2", "--y", "06"])
        .output()
        .unwrap();
    assert_eq!(text.status.code(), Some(0));
    let s = String::from_utf8(text.stdout).unwrap();
    assert!(s.contains("in F_r"));
    assert_eq!(s.lines().count(), 5);

    for bad in ["01", "05", "zz", "40"] {
        let out = bin()
            .args(["witness", "--m", "3", "--n", "2", "--y", bad])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(2), "y={bad}");
    }
}

#[test]
fn empirical_table() {
    let cfg = RunConfig::default();
    let out = commands::bc_empirical(&cfg, 2, 16).unwrap();
    assert_eq!(out.exit, Exit::Ok);
    let v = parse(&out.body);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for row in rows {
        let m = row["m"].as_u64().unwrap();
        assert_eq!(row["exists_c"], m >= 2);
        assert_eq!(row["three_divides_m"], m % 3 == 0);
    }
    let out = bin()
        .args(["bc-empirical", "--max-2m", "26"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn modulus_table_from_env_and_flag() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("moduli.json");
    fs::write(&table, r#"{"4": "19"}"#).unwrap();

    let out = bin()
        .env("APNFORGE_MODULUS_TABLE", &table)
        .args([
            "sweep",
            "--m-range",
            "2",
            "--n-range",
            "1..3",
            "--format",
            "csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().skip(1).all(|l| l.contains(",19,16,")));

    let report = dir.path().join("verify.json");
    let out = bin()
        .args(["verify", "--m", "2", "--n", "1", "--modulus-table"])
        .arg(&table)
        .arg("--out")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = parse(&fs::read_to_string(&report).unwrap());
    assert_eq!(v["params"]["modulus"], "19");

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"4": "15"}"#).unwrap();
    let out = bin()
        .args(["sweep", "--modulus-table"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .args(["sweep", "--modulus-table"])
        .arg(dir.path().join("missing.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["field", "--w", "4", "--out"])
        .arg(dir.path().join("no/such/dir/report.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    let out = bin().args(["field", "--w", "4"]).output().unwrap();
    let v = parse(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(v["modulus"], "13");
    assert_eq!(v["generator"], "2");
}

#[test]
fn bad_usage_exit_code() {
    let out = bin().args(["sweep", "--m-range", "4..2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["verify", "--m", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
