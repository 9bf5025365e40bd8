//! graph6 encoding: 6-bit big-endian chunks of the upper adjacency
//! triangle in column order, each chunk offset by 63.

use crate::error::{Error, Result};
use crate::graph::Graph;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_graph6(self))
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        from_graph6(&s).map_err(serde::de::Error::custom)
    }
}

/// Encodes a graph as a graph6 line (no trailing newline).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        // 63 <= n <= 258047: '~' then three 6-bit chunks, big-endian.
        out.push(126);
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
    let mut acc: u8 = 0;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ascii")
}

/// Parses one graph6 line. Tolerates the optional `>>graph6<<` header and
/// surrounding whitespace.
pub fn from_graph6(line: &str) -> Result<Graph> {
    let s = line.trim().strip_prefix(">>graph6<<").unwrap_or(line.trim());
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Graph6("empty line".into()));
    }
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.len() >= 2 && bytes[1] == 126 {
            return Err(Error::Graph6("graphs beyond 258047 vertices unsupported".into()));
        }
        if bytes.len() < 4 {
            return Err(Error::Graph6("truncated size field".into()));
        }
        let mut n = 0usize;
        for &b in &bytes[1..4] {
            if !(63..=126).contains(&b) {
                return Err(Error::Graph6(format!("invalid size byte {b}")));
            }
            n = (n << 6) | (b - 63) as usize;
        }
        (n, 4)
    } else {
        if !(63..=126).contains(&bytes[0]) {
            return Err(Error::Graph6(format!("invalid size byte {}", bytes[0])));
        }
        ((bytes[0] - 63) as usize, 1)
    };

    let mut g = Graph::empty(n)?;
    let total_bits = n * n.saturating_sub(1) / 2;
    let need = total_bits.div_ceil(6);
    if bytes.len() - pos < need {
        return Err(Error::Graph6(format!(
            "expected {need} data bytes for n={n}, found {}",
            bytes.len() - pos
        )));
    }
    let mut acc: u8 = 0;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            if nbits == 0 {
                let b = bytes[pos];
                pos += 1;
                if !(63..=126).contains(&b) {
                    return Err(Error::Graph6(format!("invalid data byte {b}")));
                }
                acc = b - 63;
                nbits = 6;
            }
            if (acc >> (nbits - 1)) & 1 == 1 {
                g.add_edge_mut(i, j);
            }
            nbits -= 1;
        }
    }
    if pos != bytes.len() {
        return Err(Error::Graph6("trailing bytes after graph data".into()));
    }
    Ok(g)
}

/// Emits a whitespace-separated edge list, one `u v` pair per line, 0-based.
pub fn to_edge_list(g: &Graph) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    for (u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

/// Parses a whitespace-separated edge list. The vertex count defaults to
/// `max index + 1`; pass `n` to keep trailing isolated vertices.
pub fn from_edge_list(text: &str, n: Option<usize>) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut max_v = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize> {
            tok.ok_or_else(|| Error::InvalidInput(format!("line {}: expected two vertices", lineno + 1)))?
                .parse::<usize>()
                .map_err(|e| Error::InvalidInput(format!("line {}: {e}", lineno + 1)))
        };
        let u = parse(it.next())?;
        let v = parse(it.next())?;
        if it.next().is_some() {
            return Err(Error::InvalidInput(format!("line {}: extra tokens", lineno + 1)));
        }
        max_v = max_v.max(u).max(v);
        edges.push((u, v));
    }
    let n = n.unwrap_or(if edges.is_empty() { 0 } else { max_v + 1 });
    Graph::from_edges(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_encodings() {
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(to_graph6(&k2), "A_");
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(to_graph6(&k3), "Bw");
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(to_graph6(&k4), "C~");
        let p3 = Graph::path(3).unwrap();
        assert_eq!(to_graph6(&p3), "Bg");
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(to_graph6(&c4), "Cl");
    }

    #[test]
    fn round_trip_identity_labels() {
        let g = Graph::from_edges(7, &[(0, 3), (1, 5), (2, 6), (3, 4), (0, 6)]).unwrap();
        let enc = to_graph6(&g);
        let back = from_graph6(&enc).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn large_n_header() {
        let g = Graph::empty(100).unwrap();
        let enc = to_graph6(&g);
        assert!(enc.starts_with('~'));
        assert_eq!(from_graph6(&enc).unwrap().n(), 100);
    }

    #[test]
    fn rejects_garbage() {
        assert!(from_graph6("").is_err());
        assert!(from_graph6("B").is_err());
        assert!(from_graph6("Bw ").is_ok());
        assert!(from_graph6(">>graph6<<Bw").is_ok());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_edges(5, &[(0, 1), (2, 4)]).unwrap();
        let txt = to_edge_list(&g);
        let back = from_edge_list(&txt, Some(5)).unwrap();
        assert_eq!(g, back);
        let shrunk = from_edge_list(&txt, None).unwrap();
        assert_eq!(shrunk.n(), 5);
    }
}
