//! Plain key-value run reports. Every line is `key value…`; the wall time is
//! always the last line so the rest can be compared byte for byte.

use std::fmt::Display;
use std::time::Instant;

use grpext::autring::{AutBlocks, AutMatrix};
use sha2::{Digest, Sha256};

pub struct Report {
    lines: Vec<String>,
    start: Instant,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            lines: vec![format!("command {command}")],
            start: Instant::now(),
        }
    }

    pub fn line(&mut self, key: &str, value: impl Display) {
        self.lines.push(format!("{key} {value}"));
    }

    pub fn input(&mut self, path: &str, bytes: &[u8]) {
        self.line("input", format!("{path} sha256 {}", hex::encode(Sha256::digest(bytes))));
    }

    pub fn matrix(&mut self, key: &str, m: &AutMatrix) {
        self.line(&format!("{key}-block"), m.ptype());
        for row in m.rows() {
            self.line(&format!("{key}-row"), join(&row));
        }
    }

    pub fn blocks(&mut self, key: &str, b: &AutBlocks) {
        for m in &b.blocks {
            self.matrix(key, m);
        }
    }

    pub fn finish(mut self) -> String {
        let ms = self.start.elapsed().as_secs_f64() * 1e3;
        self.lines.push(format!("wall-ms {ms:.3}"));
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

pub fn join<T: Display>(xs: &[T]) -> String {
    if xs.is_empty() {
        return "-".into();
    }
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
