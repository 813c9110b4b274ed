use std::process::Command;

fn boxworld(args: &[&str], envs: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_boxworld"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn decimals_are_rejected_with_a_hint() {
    let (code, _, err) = boxworld(&["chsh", "--x", "0.5", "--y", "0"], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("1/2"), "{err}");
}

#[test]
fn out_of_range_parameters_fail() {
    let (code, _, err) = boxworld(&["chsh", "--x", "1", "--y", "1/2"], &[]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"), "{err}");
    let (code, _, _) = boxworld(&["vertices", "--system", "square", "--x", "1/2"], &[]);
    assert_eq!(code, 1);
}

#[test]
fn negative_parameters_are_accepted() {
    let (code, out, _) = boxworld(&["chsh", "--x", "1/2", "--y", "-1/4"], &[]);
    assert_eq!(code, 0);
    assert!(out.contains("\"y\": \"-1/4\""), "{out}");
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    for args in [
        &["surface", "--grid", "3"][..],
        &["swap", "--scan"][..],
        &["vertices", "--tensor", "custom"][..],
    ] {
        let (_, one, _) = boxworld(args, &[("BOXWORLD_THREADS", "1")]);
        let (_, again, _) = boxworld(args, &[("BOXWORLD_THREADS", "1")]);
        let (_, four, _) = boxworld(args, &[("BOXWORLD_THREADS", "4")]);
        assert_eq!(one, again, "{args:?}");
        assert_eq!(one, four, "{args:?}");
    }
}

#[test]
fn surface_row_count() {
    let (code, out, _) = boxworld(&["surface", "--grid", "4"], &[]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,y,bruteforce,formula,match");
    assert_eq!(lines.len(), 1 + 25);
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
    assert!(out.contains("1/1,0/1,4/1,4/1,true"));
    let (code, _, _) = boxworld(&["surface", "--grid", "1"], &[]);
    assert_eq!(code, 2);
}

#[test]
fn vertices_as_csv() {
    let (code, out, _) = boxworld(&["vertices", "--tensor", "min", "--format", "csv"], &[]);
    assert_eq!(code, 0);
    assert!(out.starts_with("kind,label,c1,"));
    assert_eq!(out.lines().filter(|l| l.starts_with("state,")).count(), 16);
}

#[test]
fn modified_vertices_are_labelled_from_local_states() {
    let (code, out, _) = boxworld(&["vertices", "--x", "1/2", "--y", "1/4"], &[]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["state_count"], 24);
    let labels: Vec<&str> = doc["states"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["label"].as_str().unwrap())
        .collect();
    for l in 1..=24 {
        assert!(labels.contains(&format!("w{l}").as_str()), "w{l}");
    }
}

#[test]
fn behavior_file_round_trips_through_the_checks() {
    let dir = std::env::temp_dir().join(format!("boxworld-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w1.json");
    let path = path.to_str().unwrap();
    let (code, _, _) = boxworld(
        &[
            "behavior", "--state", "1", "--meas-a", "1,2", "--meas-b", "3,4", "-o", path,
        ],
        &[],
    );
    assert_eq!(code, 0);
    let (code, out, _) = boxworld(&["check-local", path], &[]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"local\": true"));

    let signalling = r#"{"p": {"00": [["1", "0"], ["0", "0"]], "01": [["1/2", "1/2"], ["0", "0"]],
                         "10": [["1", "0"], ["0", "0"]], "11": [["1", "0"], ["0", "0"]]}}"#;
    let bad = dir.join("signalling.json");
    std::fs::write(&bad, signalling).unwrap();
    let bad = bad.to_str().unwrap();
    let (code, out, _) = boxworld(&["check-nosignalling", bad], &[]);
    assert_eq!(code, 3);
    assert!(out.contains("\"party\": \"Bob\""), "{out}");
    let (code, _, err) = boxworld(&["check-local", bad], &[]);
    assert_eq!(code, 1);
    assert!(err.contains("signalling"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selfdual_reports_the_custom_product() {
    let (code, out, _) = boxworld(&["selfdual", "--system", "custom", "--limit", "1"], &[]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"state_ray_count\": 20"));
    assert!(out.contains("\"effect_ray_count\": 20"));
}

#[test]
fn swap_requires_a_complete_selection() {
    let (code, _, _) = boxworld(&["swap", "--ab", "17"], &[]);
    assert_ne!(code, 0);
    let (code, _, err) = boxworld(&["swap", "--ab", "17", "--cd", "18", "--effect", "21"], &[]);
    assert_eq!(code, 1);
    assert!(err.contains("e21"), "{err}");
}
