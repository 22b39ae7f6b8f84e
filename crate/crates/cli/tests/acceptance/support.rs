//! Shared helpers: verdicts, walk enumeration, solve log.

use std::any::Any;
use std::sync::Mutex;

use liftdec_core::BinaryWord;

pub struct Verdict {
    pub pass: bool,
    pub summary: String,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(pass: bool, summary: impl Into<String>) -> Self {
        Self {
            pass,
            summary: summary.into(),
            notes: Vec::new(),
        }
    }

    pub fn fail(summary: impl Into<String>) -> Self {
        Self::new(false, summary)
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }
}

pub fn panic_text(e: &Box<dyn Any + Send>) -> String {
    if let Some(s) = e.downcast_ref::<String>() {
        s.clone()
    } else if let Some(s) = e.downcast_ref::<&str>() {
        s.to_string()
    } else {
        "unknown panic".into()
    }
}

/// All walks with `k` vertices, in lexicographic order of vertex sequences.
pub fn walks(adj: &[Vec<usize>], k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..adj.len()).map(|v| vec![v]).collect();
    for _ in 1..k {
        out = out
            .into_iter()
            .flat_map(|w| {
                let last = *w.last().unwrap();
                adj[last].iter().map(move |&u| {
                    let mut x = w.clone();
                    x.push(u);
                    x
                })
            })
            .collect();
    }
    out
}

/// XOR of the vertex indicators: the parity of `z` over a tuple is `popcount(z & mask) & 1`.
pub fn parity_mask(tuple: &[usize]) -> u64 {
    tuple.iter().fold(0u64, |m, &v| m ^ (1 << v))
}

pub fn signs(w: &BinaryWord) -> Vec<f64> {
    w.signs().into_iter().map(f64::from).collect()
}

/// `(source, Ψ, agreement)` of every List Decoding Program solved by the suite.
pub static SOLVES: Mutex<Vec<(String, f64, f64)>> = Mutex::new(Vec::new());

pub fn record_solve(source: impl Into<String>, psi: f64, agreement: f64) {
    SOLVES.lock().unwrap().push((source.into(), psi, agreement));
}

pub fn fmt_rate(hits: usize, total: usize) -> String {
    format!("{hits}/{total} ({:.1}%)", 100.0 * hits as f64 / total.max(1) as f64)
}
