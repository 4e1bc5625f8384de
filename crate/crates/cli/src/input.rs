//! Graph arguments: `g6:<code>`, `file:<path>`, family shorthand
//! `<family>:<params>[@<sizes>]`, or an unprefixed graph6 code or file path.

use std::path::Path;

use rho_core::constructions::replication_graph;
use rho_core::graph::{parse_edge_list, parse_graph6, FamilySpec, Graph};

use crate::CliError;

/// A parsed graph argument. `sizes` is set when the argument carried an
/// `@` size vector; `base` is then the graph being replicated.
#[derive(Debug, Clone)]
pub struct GraphInput {
    pub graph: Graph,
    pub base: Option<Graph>,
    pub sizes: Option<Vec<usize>>,
}

pub fn parse_sizes(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::Option(format!("bad size {t:?} in {text:?}"))))
        .collect()
}

fn graph_err(token: &str) -> impl Fn(rho_core::graph::GraphError) -> CliError + '_ {
    move |source| CliError::Graph { token: token.to_string(), source }
}

fn read_file(path: &str) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_string(), source })?;
    let trimmed = text.trim();
    if !trimmed.contains(char::is_whitespace) {
        if let Ok(g) = parse_graph6(trimmed) {
            return Ok(g);
        }
    }
    parse_edge_list(&text).map_err(graph_err(path))
}

pub fn parse_graph_arg(token: &str) -> Result<GraphInput, CliError> {
    let plain = |graph| GraphInput { graph, base: None, sizes: None };
    if let Some(code) = token.strip_prefix("g6:") {
        return Ok(plain(parse_graph6(code).map_err(graph_err(token))?));
    }
    if let Some(path) = token.strip_prefix("file:") {
        return Ok(plain(read_file(path)?));
    }
    let (head, sizes) = match token.split_once('@') {
        Some((h, s)) => (h, Some(parse_sizes(s)?)),
        None => (token, None),
    };
    // ':' never occurs in graph6, so it always marks a family name
    let base = if head.contains(':') {
        head.parse::<FamilySpec>().and_then(|f| f.build()).map_err(graph_err(token))?
    } else if sizes.is_some() {
        return Err(CliError::Option(format!("{token:?}: sizes need a family shorthand")));
    } else if Path::new(token).is_file() {
        read_file(token)?
    } else {
        parse_graph6(token).map_err(graph_err(token))?
    };
    match sizes {
        Some(s) => {
            let r = replication_graph(&base, &s)?;
            Ok(GraphInput { graph: r.expanded().clone(), base: Some(base), sizes: Some(s) })
        }
        None => Ok(plain(base)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rho_core::graph::{is_isomorphic, path, to_graph6};

    #[test]
    fn forms() {
        let p4 = path(4).unwrap();
        let code = to_graph6(&p4);
        assert_eq!(parse_graph_arg("path:4").unwrap().graph, p4);
        assert_eq!(parse_graph_arg(&format!("g6:{code}")).unwrap().graph, p4);
        assert_eq!(parse_graph_arg(&code).unwrap().graph, p4);
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("p4.txt");
        std::fs::write(&f, "4 3\n0 1\n1 2\n2 3\n").unwrap();
        assert_eq!(parse_graph_arg(f.to_str().unwrap()).unwrap().graph, p4);
        assert_eq!(parse_graph_arg(&format!("file:{}", f.display())).unwrap().graph, p4);
    }

    #[test]
    fn shorthand_with_sizes() {
        let got = parse_graph_arg("path:5@1,2,2,2,3").unwrap();
        let want = replication_graph(&path(5).unwrap(), &[1, 2, 2, 2, 3]).unwrap();
        assert!(is_isomorphic(&got.graph, want.expanded()));
        assert_eq!(got.sizes, Some(vec![1, 2, 2, 2, 3]));
    }

    #[test]
    fn errors_name_the_token() {
        let e = parse_graph_arg("path:x").unwrap_err().to_string();
        assert!(e.contains("path:x"), "{e}");
        assert!(parse_graph_arg("path:3@1,2").is_err());
        assert!(parse_graph_arg("g6:!!").is_err());
    }
}
