//! graph6 and plain edge-list text formats.

use super::{Graph, GraphError, MAX_ORDER};

const BIAS: u8 = 63;

fn g6_error(offset: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Graph6 { offset, reason: reason.into() }
}

/// Parses a graph6 string. Surrounding ASCII whitespace is ignored.
///
/// Padding bits in the final byte are not required to be zero.
pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let trimmed_start = text.len() - text.trim_start().len();
    let bytes = text.trim().as_bytes();
    if bytes.is_empty() {
        return Err(g6_error(trimmed_start, "empty input"));
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(g6_error(trimmed_start + i, format!("byte {b} outside 63..=126")));
        }
    }

    let (n, header_len) = if bytes[0] == 126 {
        if bytes.len() >= 2 && bytes[1] == 126 {
            return Err(g6_error(trimmed_start + 1, "8-byte header implies more than 64 vertices"));
        }
        if bytes.len() < 4 {
            return Err(g6_error(trimmed_start + bytes.len(), "truncated extended header"));
        }
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | usize::from(b - BIAS));
        (n, 4)
    } else {
        (usize::from(bytes[0] - BIAS), 1)
    };
    if n == 0 || n > MAX_ORDER {
        return Err(g6_error(trimmed_start, format!("order {n} is outside 1..=64")));
    }

    let nbits = n * (n - 1) / 2;
    let expected = header_len + nbits.div_ceil(6);
    if bytes.len() != expected {
        let offset = trimmed_start + bytes.len().min(expected);
        return Err(g6_error(
            offset,
            format!("expected {expected} bytes for {n} vertices, found {}", bytes.len()),
        ));
    }

    let mut g = Graph::new(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = bytes[header_len + k / 6] - BIAS;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.set_edge(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Encodes a graph as graph6 with zero padding.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out: Vec<u8> = Vec::with_capacity(4 + n * n / 12);
    if n <= 62 {
        out.push(n as u8 + BIAS);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + BIAS);
        }
    }
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | u8::from(g.has_edge(i, j));
            k += 1;
            if k % 6 == 0 {
                out.push(acc + BIAS);
                acc = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push((acc << (6 - k % 6)) + BIAS);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

/// Parses the edge-list format: a header line `n m` followed by `m` lines `u v`
/// with 0-based endpoints. Blank lines and `#` comments are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let err = |line: usize, reason: String| GraphError::EdgeList { line, reason };
    let parse_pair = |line: usize, s: &str| -> Result<(usize, usize), GraphError> {
        let fields: Vec<&str> = s.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(err(line, format!("expected two integers, found {s:?}")));
        }
        let a = fields[0].parse().map_err(|_| err(line, format!("bad integer {:?}", fields[0])))?;
        let b = fields[1].parse().map_err(|_| err(line, format!("bad integer {:?}", fields[1])))?;
        Ok((a, b))
    };

    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
    let (n, m) = parse_pair(hline, header)?;
    let mut g = Graph::new(n).map_err(|e| err(hline, e.to_string()))?;
    let mut count = 0;
    for (line, body) in lines {
        let (u, v) = parse_pair(line, body)?;
        if u >= n || v >= n {
            return Err(err(line, format!("endpoint out of range for order {n}")));
        }
        if u == v {
            return Err(err(line, format!("self-loop at vertex {u}")));
        }
        g.set_edge(u, v);
        count += 1;
    }
    if count != m {
        return Err(err(hline, format!("header announces {m} edges, found {count}")));
    }
    Ok(g)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.order(), g.edge_count());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::super::{clique, path};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_encodings() {
        assert_eq!(parse_graph6("@").unwrap(), Graph::new(1).unwrap());
        assert_eq!(parse_graph6("A?").unwrap(), Graph::new(2).unwrap());
        assert_eq!(parse_graph6("A_").unwrap(), clique(2).unwrap());
        assert_eq!(to_graph6(&Graph::new(1).unwrap()), "@");
        assert_eq!(to_graph6(&Graph::new(2).unwrap()), "A?");
        assert_eq!(to_graph6(&clique(2).unwrap()), "A_");
    }

    #[test]
    fn known_strings() {
        // Bits x01 x02 x12 x03 x13 x23 = 1 0 1 0 0 1 -> 41 + 63 = 104 = 'h'.
        assert_eq!(to_graph6(&path(4).unwrap()), "Ch");
        // K_4: all six bits set -> 63 + 63 = '~'.
        assert_eq!(to_graph6(&clique(4).unwrap()), "C~");
    }

    #[test]
    fn extended_header() {
        let g = path(63).unwrap();
        let s = to_graph6(&g);
        assert_eq!(&s.as_bytes()[..4], &[126, 63, 63 + 0, 63 + 63]);
        assert_eq!(parse_graph6(&s).unwrap(), g);
        let g = clique(64).unwrap();
        assert_eq!(parse_graph6(&to_graph6(&g)).unwrap(), g);
    }

    #[test]
    fn parse_errors_name_offsets() {
        match parse_graph6("A_ _") {
            Err(GraphError::Graph6 { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("{other:?}"),
        }
        match parse_graph6("B") {
            Err(GraphError::Graph6 { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("{other:?}"),
        }
        match parse_graph6("A__") {
            Err(GraphError::Graph6 { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("{other:?}"),
        }
        // n = 65 in extended form.
        let s = [126u8, 63, 63 + 1, 63 + 1];
        match parse_graph6(std::str::from_utf8(&s).unwrap()) {
            Err(GraphError::Graph6 { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("{other:?}"),
        }
        assert!(parse_graph6("?").is_err());
        assert!(parse_graph6("").is_err());
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let g = path(4).unwrap();
        let text = to_edge_list(&g);
        assert_eq!(text, "4 3\n0 1\n1 2\n2 3\n");
        assert_eq!(parse_edge_list(&text).unwrap(), g);
        assert!(matches!(parse_edge_list("3 1\n0 3\n"), Err(GraphError::EdgeList { line: 2, .. })));
        assert!(matches!(parse_edge_list("3 2\n0 1\n"), Err(GraphError::EdgeList { line: 1, .. })));
        assert!(matches!(parse_edge_list("3 1\n1 1\n"), Err(GraphError::EdgeList { line: 2, .. })));
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut g = Graph::new(n).unwrap();
                let mut k = 0;
                for j in 1..n {
                    for i in 0..j {
                        if bits[k] {
                            g.set_edge(i, j);
                        }
                        k += 1;
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn graph6_round_trip(g in arb_graph(64)) {
            let s = to_graph6(&g);
            prop_assert_eq!(parse_graph6(&s).unwrap(), g.clone());
            prop_assert_eq!(to_graph6(&parse_graph6(&s).unwrap()), s);
            prop_assert_eq!(parse_edge_list(&to_edge_list(&g)).unwrap(), g);
        }
    }
}
