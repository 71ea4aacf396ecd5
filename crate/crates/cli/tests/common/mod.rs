#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

pub const CATALOG: [&str; 5] = ["klein-gordon", "dirac", "proca", "schroedinger", "bdg"];

pub fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"))
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn spinstat(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_spinstat"))
        .args(args)
        .output()
        .expect("spinstat runs");
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// Full catalog report as JSON via `--json -`.
pub fn catalog_report(name: &str) -> (i32, Value) {
    let out = spinstat(&["report", "--catalog", name, "--json", "-"]);
    let value = serde_json::from_str(&out.stdout)
        .unwrap_or_else(|e| panic!("{name}: bad JSON ({e}): {}", out.stdout));
    (out.code, value)
}

/// Structural equality with numbers compared to `1e-10 + 1e-8 |x|`.
pub fn json_close(a: &Value, b: &Value, path: &str) -> Result<(), String> {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            if (x - y).abs() <= 1e-10 + 1e-8 * x.abs().max(y.abs()) {
                Ok(())
            } else {
                Err(format!("{path}: {x} != {y}"))
            }
        }
        (Value::Array(xs), Value::Array(ys)) => {
            if xs.len() != ys.len() {
                return Err(format!("{path}: length {} != {}", xs.len(), ys.len()));
            }
            for (i, (x, y)) in xs.iter().zip(ys).enumerate() {
                json_close(x, y, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        (Value::Object(xs), Value::Object(ys)) => {
            let kx: Vec<_> = xs.keys().collect();
            let ky: Vec<_> = ys.keys().collect();
            if kx != ky {
                return Err(format!("{path}: keys {kx:?} != {ky:?}"));
            }
            for (k, x) in xs {
                json_close(x, &ys[k], &format!("{path}.{k}"))?;
            }
            Ok(())
        }
        _ if a == b => Ok(()),
        _ => Err(format!("{path}: {a} != {b}")),
    }
}

/// `(fixture, command, expected exit code)`
pub const EXIT_CASES: [(&str, &str, i32); 15] = [
    ("bdg.toml", "check", 0),
    ("bdg.toml", "statistics", 0),
    ("dirac_m4.toml", "check", 0),
    ("dirac_m4.toml", "branch-points", 0),
    ("dirac_m4.toml", "corollary", 0),
    ("malformed_expr.toml", "check", 2),
    ("malformed_toml.toml", "check", 2),
    ("unknown_param.toml", "statistics", 2),
    ("missing_file.toml", "check", 2),
    ("zero_m_plus.toml", "check", 3),
    ("tachyonic.toml", "check", 3),
    ("tachyonic.toml", "statistics", 3),
    ("negative_m_plus.toml", "check", 0),
    ("negative_m_plus.toml", "statistics", 4),
    ("zero_e_squared.toml", "branch-points", 3),
];
