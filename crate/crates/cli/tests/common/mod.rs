#![allow(dead_code)]

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

pub const PM_LIST: [(u64, u64); 8] = [(3, 5), (5, 3), (3, 7), (7, 3), (5, 7), (7, 5), (3, 11), (11, 3)];

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub elapsed: Duration,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout)
            .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}\nstderr: {}", self.stdout, self.stderr))
    }
}

pub fn ffk(args: &[&str]) -> Run {
    ffk_env(args, &[])
}

pub fn ffk_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_ffk"))
        .args(args)
        .envs(env.iter().copied())
        .output()
        .expect("spawn ffk");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        elapsed: start.elapsed(),
    }
}

/// All checks of an envelope whose name is one of `names`.
pub fn checks_named<'a>(doc: &'a Value, names: &[&str]) -> Vec<&'a Value> {
    doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| names.contains(&c["name"].as_str().unwrap()))
        .collect()
}

pub fn passed(c: &Value) -> bool {
    c["pass"].as_bool().unwrap()
}
