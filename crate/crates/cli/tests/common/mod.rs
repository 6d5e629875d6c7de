//! Golden-file runner shared by the `golden` and `acceptance` targets.
//!
//! Each case is `tests/golden/<name>.args` (whitespace-separated arguments)
//! with the expected transcript in `<name>.out`. Set `UPDATE_GOLDEN=1` to
//! rewrite the expected files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn case_names() -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(golden_dir())
        .expect("golden directory")
        .filter_map(|e| {
            let path = e.ok()?.path();
            (path.extension()? == "args").then(|| path.file_stem()?.to_str().map(String::from))?
        })
        .collect();
    names.sort();
    names
}

/// Runs the binary on the case's arguments and renders the transcript.
pub fn transcript(name: &str) -> String {
    let dir = golden_dir();
    let args = fs::read_to_string(dir.join(format!("{name}.args"))).expect("args file");
    let output = Command::new(env!("CARGO_BIN_EXE_crossing"))
        .args(args.split_whitespace())
        .current_dir(&dir)
        .output()
        .expect("run crossing");
    format!(
        "exit: {}\n--- stdout\n{}--- stderr\n{}",
        output.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    )
}

/// Checks every case; returns the names of the mismatches.
pub fn check_all() -> (usize, Vec<String>) {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let names = case_names();
    let mut failed = Vec::new();
    for name in &names {
        let got = transcript(name);
        let path = golden_dir().join(format!("{name}.out"));
        if update {
            fs::write(&path, &got).expect("write golden");
            continue;
        }
        match fs::read_to_string(&path) {
            Ok(want) if want == got => {}
            Ok(want) => {
                eprintln!("golden mismatch: {name}\n--- expected\n{want}--- got\n{got}");
                failed.push(name.clone());
            }
            Err(_) => {
                eprintln!("golden missing: {name}\n{got}");
                failed.push(name.clone());
            }
        }
    }
    (names.len(), failed)
}
