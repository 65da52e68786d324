//! Text instance format: `maxtsp 1`, then `n`, then the row-major upper
//! triangle of weights, all whitespace-separated.

use std::path::Path;

use super::generate::Instance;
use crate::error::{Error, Result};
use crate::graph::{CompleteGraph, Weight};

pub const MAGIC: &str = "maxtsp 1";

pub fn write_instance(g: &CompleteGraph) -> String {
    let n = g.n();
    let mut s = format!("{MAGIC}\n{n}\n");
    for u in 0..n {
        let row: Vec<String> = (u + 1..n).map(|v| g.w(u, v).to_string()).collect();
        if !row.is_empty() {
            s.push_str(&row.join(" "));
            s.push('\n');
        }
    }
    s
}

pub fn parse_instance(text: &str) -> Result<CompleteGraph> {
    let mut lines = text.lines();
    match lines.next() {
        Some(l) if l.trim() == MAGIC => {}
        Some(l) => return Err(Error::Instance(format!("bad header {:?}", l.trim()))),
        None => return Err(Error::Instance("empty instance file".into())),
    }
    let mut tokens = lines.flat_map(str::split_whitespace);
    let n: usize = tokens
        .next()
        .ok_or_else(|| Error::Instance("missing vertex count".into()))?
        .parse()
        .map_err(|e| Error::Instance(format!("bad vertex count: {e}")))?;
    if n < 3 {
        return Err(Error::Instance(format!("need at least 3 vertices, got {n}")));
    }
    let need = n * (n - 1) / 2;
    let mut tri = Vec::with_capacity(need);
    for t in tokens {
        let x: Weight = t.parse().map_err(|e| Error::Instance(format!("bad weight {t:?}: {e}")))?;
        tri.push(x);
    }
    if tri.len() != need {
        return Err(Error::Instance(format!("expected {need} weights, found {}", tri.len())));
    }
    CompleteGraph::from_upper_triangle(n, &tri)
}

pub fn read_instance_file(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Instance(format!("{}: {e}", path.display())))?;
    let graph = parse_instance(&text)?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(Instance::new(graph, name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::generate::{generate_instance, Family};

    #[test]
    fn round_trip() {
        for f in Family::ALL {
            let g = generate_instance(f, 7, 1).unwrap().graph;
            let text = write_instance(&g);
            assert_eq!(parse_instance(&text).unwrap(), g);
            assert_eq!(write_instance(&parse_instance(&text).unwrap()), text);
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_instance("").is_err());
        assert!(parse_instance("maxtsp 2\n3\n1 1 1\n").is_err());
        assert!(parse_instance("maxtsp 1\n3\n1 1\n").is_err());
        assert!(parse_instance("maxtsp 1\n3\n1 -1 1\n").is_err());
        assert!(parse_instance("maxtsp 1\n2\n1\n").is_err());
        assert_eq!(parse_instance("maxtsp 1\n3\n1 2 3").unwrap().w(1, 2), 3);
    }
}
