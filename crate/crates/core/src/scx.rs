//! The `.scx` facet file format.
//!
//! UTF-8 text. `#` starts a comment running to end of line; blank lines
//! are ignored. Every remaining line is either `vertex <id>`, declaring an
//! isolated vertex, or a space-separated non-empty list of vertex ids — a
//! facet, order-insensitive. The complex is the downward closure of the
//! facets plus the declared vertices.

use std::path::Path;

use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};

/// Parses `.scx` text. Returns the complex and the comment lines (without
/// the leading `#`), in order, so emitters can preserve provenance.
pub fn parse_scx(text: &str) -> Result<(SimplicialComplex, Vec<String>)> {
    let mut facets: Vec<Face> = Vec::new();
    let mut isolated: Vec<VertexId> = Vec::new();
    let mut comments: Vec<String> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.find('#') {
            Some(pos) => {
                comments.push(raw[pos + 1..].trim().to_string());
                &raw[..pos]
            }
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let first = tokens.next().expect("non-empty line has a token");
        if first == "vertex" {
            let id = tokens
                .next()
                .ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: "expected an id after 'vertex'".into(),
                })
                .and_then(|t| parse_id(t, lineno))?;
            if tokens.next().is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "'vertex' takes exactly one id".into(),
                });
            }
            isolated.push(VertexId(id));
        } else {
            let mut ids = vec![parse_id(first, lineno)?];
            for t in tokens {
                ids.push(parse_id(t, lineno)?);
            }
            let face = Face::from_ids(&ids).map_err(|_| Error::Parse {
                line: lineno,
                msg: "duplicate vertex in facet".into(),
            })?;
            facets.push(face);
        }
    }
    let complex = SimplicialComplex::from_facets(&facets, &isolated)?;
    Ok((complex, comments))
}

fn parse_id(token: &str, line: usize) -> Result<u32> {
    token.parse::<u32>().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid vertex id '{token}'"),
    })
}

pub fn parse_scx_file(path: &Path) -> Result<(SimplicialComplex, Vec<String>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_scx(&text)
}

/// Renders a complex as `.scx` text: comment lines first, then isolated
/// vertices, then the maximal faces of size at least two.
pub fn emit_scx(c: &SimplicialComplex, comments: &[String]) -> String {
    let mut out = String::new();
    for comment in comments {
        out.push_str("# ");
        out.push_str(comment);
        out.push('\n');
    }
    for f in c.facets() {
        if f.card() == 1 {
            out.push_str(&format!("vertex {}\n", f.vertices()[0]));
        } else if f.card() >= 2 {
            let ids: Vec<String> = f.vertices().iter().map(|v| v.to_string()).collect();
            out.push_str(&ids.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn emit_scx_file(c: &SimplicialComplex, comments: &[String], path: &Path) -> Result<()> {
    std::fs::write(path, emit_scx(c, comments))
        .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))
}
