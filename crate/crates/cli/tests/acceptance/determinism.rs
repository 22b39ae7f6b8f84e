//! Criterion 11: fixed seeds give byte-identical reports and artifacts.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use tempfile::TempDir;

use crate::support::Verdict;

/// Every command writes its artifact with `-o` (when it has one) and its report under `--out`.
#[rustfmt::skip]
const SCRIPT: &[&[&str]] = &[
    &["gen-graph", "--n", "8", "--d", "3", "--seed", "21", "-o", "g.graph"],
    &["gen-complex", "noisy", "--t", "6", "--d", "3", "--keep", "0.8", "--seed", "21", "-o", "x.cx"],
    &["gen-code", "--n", "8", "--m", "3", "--target-distance", "3/8", "--seed", "21", "-o", "c.code"],
    &["gen-code", "--n", "6", "--m", "2", "--target-distance", "1/3", "--seed", "21", "-o", "c6.code"],
    &["encode", "--code", "c.code", "--graph", "g.graph", "--k", "2", "--message", "110", "-o", "y.word"],
    &["corrupt", "--input", "y.word", "--fraction", "0.15", "--seed", "21", "-o", "yu.word"],
    &["corrupt", "--input", "y.word", "--fraction", "0.3", "--seed", "22", "-o", "yl.word"],
    &["decode", "unique", "--code", "c.code", "--graph", "g.graph", "--k", "2", "--input", "yu.word", "--oracle", "-o", "u.list"],
    &["decode", "list", "--code", "c.code", "--graph", "g.graph", "--k", "2", "--input", "yl.word", "--oracle", "--slices", "40", "--dump-pe", "pe.txt", "-o", "l.list"],
    &["measure", "tensoriality", "--graph", "g.graph", "--k", "2", "--pe", "pe.txt", "--slices", "10"],
    &["measure", "expansion", "--complex", "x.cx"],
    &["measure", "parity", "--graph", "g.graph", "--k", "3", "--beta0", "1/4"],
    &["measure", "robustness", "--graph", "g.graph", "--k", "2", "--delta0", "3/8", "--trials", "200"],
    &["measure", "splittability", "--graph", "g.graph", "--k", "4"],
    &["measure", "rate", "--complex", "x.cx", "--k", "3", "--r1", "1/3"],
    &["encode", "--code", "c6.code", "--complex", "x.cx", "--k", "3", "--message", "01", "--lift", "dprod", "-o", "p.word"],
    &["corrupt", "--input", "p.word", "--fraction", "1/5", "--seed", "23", "-o", "pc.word"],
    &["decode", "product", "--code", "c6.code", "--complex", "x.cx", "--k", "3", "--input", "pc.word", "--product-eps", "1/2", "--slices", "20", "--oracle", "-o", "p.list"],
];

/// Runs the script in a fresh directory; returns every stream and file keyed by name.
fn run_script(format: &str) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let tmp = TempDir::new().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    let mut out = BTreeMap::new();
    for (i, cmd) in SCRIPT.iter().enumerate() {
        let res = Command::new(env!("CARGO_BIN_EXE_liftdec"))
            .current_dir(dir)
            .args(*cmd)
            .args(["--format", format, "--out", "reports"])
            .output()
            .map_err(|e| e.to_string())?;
        if !res.status.success() {
            return Err(format!(
                "{cmd:?} exited with {:?}: {}",
                res.status.code(),
                String::from_utf8_lossy(&res.stderr)
            ));
        }
        out.insert(format!("{i:02} stdout"), res.stdout);
        out.insert(format!("{i:02} stderr"), res.stderr);
    }
    collect(dir, dir, &mut out).map_err(|e| e.to_string())?;
    Ok(out)
}

fn collect(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) -> std::io::Result<()> {
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            collect(root, &path, out)?;
        } else {
            let name = path.strip_prefix(root).unwrap().display().to_string();
            out.insert(name, std::fs::read(&path)?);
        }
    }
    Ok(())
}

pub fn determinism() -> Verdict {
    let mut compared = 0;
    let mut bad = Vec::new();
    for format in ["text", "json-lines"] {
        let (a, b) = match (run_script(format), run_script(format)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return Verdict::fail(format!("{format}: {e}")),
        };
        if a.keys().ne(b.keys()) {
            bad.push(format!("{format}: runs produced different file sets"));
        }
        for (name, bytes) in &a {
            compared += 1;
            if b.get(name) != Some(bytes) {
                bad.push(format!("{format}: {name} differs"));
            }
        }
    }
    let v = Verdict::new(
        bad.is_empty(),
        format!(
            "{} commands × 2 formats, {compared} streams and files compared byte-for-byte",
            SCRIPT.len()
        ),
    );
    bad.into_iter().take(8).fold(v, Verdict::note)
}
