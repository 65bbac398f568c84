use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_citenorm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(path: &Path) -> String {
    path.to_string_lossy().into_owned()
}

/// Group A as a corpus file plus a baseline table carrying the printed expectations.
fn write_group_a(dir: &Path) {
    let rows: [(i32, u64, f64); 15] = [
        (1994, 6, 6.97),
        (1994, 3, 6.97),
        (1995, 0, 7.39),
        (1995, 2, 2.54),
        (1995, 5, 7.39),
        (1997, 21, 3.57),
        (1997, 1, 4.42),
        (1998, 6, 2.48),
        (1998, 6, 2.48),
        (1998, 3, 2.17),
        (1999, 16, 1.52),
        (1999, 13, 1.52),
        (1999, 5, 0.45),
        (1999, 1, 1.09),
        (2000, 0, 0.21),
    ];
    let mut corpus = String::new();
    let mut baselines = String::from("field_id,pub_year,mean_citations,cell_size\n");
    for (i, (year, c, e)) in rows.iter().enumerate() {
        corpus.push_str(&format!(
            "{{\"id\":\"A{i:02}\",\"unit_ids\":[\"A\"],\"field_ids\":[\"F{i:02}\"],\"pub_year\":{year},\"doc_type\":\"article\",\"citations_total\":{c}}}\n"
        ));
        baselines.push_str(&format!("F{i:02},{year},{e:.6},1\n"));
    }
    fs::write(dir.join("a.jsonl"), corpus).unwrap();
    fs::write(dir.join("a_baselines.csv"), baselines).unwrap();
}

#[test]
fn group_a_scores_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    write_group_a(dir.path());
    let out = dir.path().join("scores.csv");
    let status = run(&[
        "score",
        "--corpus",
        &s(&dir.path().join("a.jsonl")),
        "--census",
        "2000",
        "--units",
        "A",
        "--baselines",
        &s(&dir.path().join("a_baselines.csv")),
        "--out",
        &s(&out),
    ]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        "unit_id,n_total,n_mncs2,n_excluded_zero_e,cpp_fcsm,mncs1,mncs2\nA,15,14,0,1.7198,3.0795,3.2995\n"
    );

    let rank = run(&["rank", "--scores", &s(&out), "--by", "mncs2", "--top", "10"]);
    assert!(rank.status.success());
    assert_eq!(String::from_utf8(rank.stdout).unwrap(), "rank,unit_id,score\n1,A,3.30\n");

    let svg = dir.path().join("a.svg");
    let plot = run(&["plot", "--scores", &s(&out), "--x", "cpp_fcsm", "--y", "mncs2", "--out", &s(&svg)]);
    assert!(plot.status.success());
    let svg = fs::read_to_string(svg).unwrap();
    // 14 publications with a full citation year: at most 50, so a red square
    assert!(svg.contains("#CC0000") && svg.contains("<title>A</title></rect>"));
}

#[test]
fn validation_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("bad.jsonl");
    fs::write(
        &corpus,
        "{\"id\":\"P1\",\"unit_ids\":[],\"field_ids\":[\"F\"],\"pub_year\":1999,\"doc_type\":\"article\",\"citations_total\":-1}\n",
    )
    .unwrap();
    let out = run(&["baselines", "--corpus", &s(&corpus), "--census", "2000", "--out", &s(&dir.path().join("b.csv"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("negative citation count"));

    write_group_a(dir.path());
    let missing_unit = run(&[
        "score",
        "--corpus",
        &s(&dir.path().join("a.jsonl")),
        "--census",
        "2000",
        "--units",
        "nobody",
        "--out",
        &s(&dir.path().join("s.csv")),
    ]);
    assert_eq!(missing_unit.status.code(), Some(1));

    let bad_indicator = run(&["rank", "--scores", &s(&dir.path().join("a.jsonl")), "--by", "hindex"]);
    assert_eq!(bad_indicator.status.code(), Some(1));

    let bad_args = run(&["score", "--census", "nineteen"]);
    assert_eq!(bad_args.status.code(), Some(1));
}

#[test]
fn io_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "baselines",
        "--corpus",
        &s(&dir.path().join("missing.jsonl")),
        "--census",
        "2000",
        "--out",
        &s(&dir.path().join("b.csv")),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["simulate", "--config", &s(&dir.path().join("nope.json")), "--out", "x.jsonl"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_then_analyse() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.json");
    fs::write(
        &config,
        r#"{"fields":[{"field_id":"F","rate":2.0}],"units":[{"unit_id":"U","quality":1.0,"n_pubs":300},{"unit_id":"V","quality":1.5,"n_pubs":300}],
           "first_year":2001,"census_year":2005,"dispersion":0.5,"seed":9,"same_year_damping":0.2}"#,
    )
    .unwrap();
    let corpus = dir.path().join("c.jsonl");
    assert!(run(&["simulate", "--config", &s(&config), "--out", &s(&corpus)]).status.success());
    let lines = fs::read_to_string(&corpus).unwrap();
    assert_eq!(lines.lines().count(), 600);

    let traj = dir.path().join("t.csv");
    assert!(run(&["trajectory", "--corpus", &s(&corpus), "--field", "F", "--pub-year", "2001", "--out", &s(&traj)])
        .status
        .success());
    let traj = fs::read_to_string(traj).unwrap();
    assert!(traj.starts_with("year,n_pubs,mean_citations\n2001,"));
    assert_eq!(traj.lines().count(), 6);

    let age = dir.path().join("age.csv");
    assert!(run(&["age-corr", "--corpus", &s(&corpus), "--field", "F", "--pub-year", "2001", "--out", &s(&age)])
        .status
        .success());
    let age = fs::read_to_string(age).unwrap();
    assert!(age.starts_with(",2001,2002,2003,2004,2005\n2001,,"));

    let scores = dir.path().join("s.csv");
    assert!(run(&["score", "--corpus", &s(&corpus), "--census", "2005", "--out", &s(&scores)]).status.success());
    let corr = dir.path().join("r.csv");
    assert!(run(&["correlate", "--scores", &s(&scores), "--out", &s(&corr)]).status.success());
    let corr = fs::read_to_string(corr).unwrap();
    assert!(corr.starts_with("x,y,n,pearson,spearman\ncpp_fcsm,mncs1,2,"));

    let baselines = dir.path().join("b.csv");
    assert!(run(&["baselines", "--corpus", &s(&corpus), "--census", "2005", "--out", &s(&baselines)]).status.success());
    assert_eq!(fs::read_to_string(baselines).unwrap().lines().count(), 6);
}
