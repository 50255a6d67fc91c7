//! Line-oriented algebra description files.
//!
//! ```text
//! # comment
//! field 2
//! vertex 1
//! vertex 2
//! arrow a 2 1
//! rel a.b + 2*c.d
//! ```
//!
//! Relation terms are `[k*]arrow(.arrow)*`; coefficients may be negative
//! and are reduced mod p.

use crate::algebra::{Arrow, BoundQuiverSpec, Quiver, Relation, Term};
use crate::error::{Error, Result};
use crate::linalg::Fp;

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_spec(text: &str) -> Result<BoundQuiverSpec> {
    let mut field: Option<Fp> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut raw_rels: Vec<(usize, Vec<(i64, Vec<usize>)>)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let head = parts.next().unwrap();
        let rest: Vec<&str> = parts.collect();
        match head {
            "field" => {
                let [p] = rest[..] else {
                    return Err(err(ln, "expected `field <p>`"));
                };
                if field.is_some() {
                    return Err(err(ln, "field declared twice"));
                }
                let p: u8 = p.parse().map_err(|_| err(ln, format!("bad prime {p}")))?;
                field = Some(Fp::new(p).map_err(|e| err(ln, e.to_string()))?);
            }
            "vertex" => {
                let [v] = rest[..] else {
                    return Err(err(ln, "expected `vertex <label>`"));
                };
                if vertices.iter().any(|w| w == v) {
                    return Err(err(ln, format!("duplicate vertex {v}")));
                }
                vertices.push(v.to_string());
            }
            "arrow" => {
                let [label, s, t] = rest[..] else {
                    return Err(err(ln, "expected `arrow <label> <source> <target>`"));
                };
                if arrows.iter().any(|a| a.label == label) {
                    return Err(err(ln, format!("duplicate arrow {label}")));
                }
                if label.contains('.') || label.contains('*') {
                    return Err(err(ln, format!("bad arrow label {label}")));
                }
                let find = |v: &str| {
                    vertices
                        .iter()
                        .position(|w| w == v)
                        .ok_or_else(|| err(ln, format!("unknown vertex {v}")))
                };
                arrows.push(Arrow {
                    label: label.to_string(),
                    source: find(s)?,
                    target: find(t)?,
                });
            }
            "rel" => {
                let body: String = rest.join(" ");
                if body.is_empty() {
                    return Err(err(ln, "empty relation"));
                }
                let mut terms = Vec::new();
                for term in body.split('+') {
                    let term: String = term.split_whitespace().collect();
                    terms.push(parse_term(ln, &term, &arrows)?);
                }
                let (s0, t0) = endpoints(&terms[0].1, &arrows);
                for (_, path) in &terms[1..] {
                    if endpoints(path, &arrows) != (s0, t0) {
                        return Err(err(ln, "relation terms are not parallel paths"));
                    }
                }
                raw_rels.push((ln, terms));
            }
            other => return Err(err(ln, format!("unknown directive {other}"))),
        }
    }

    let field = field.ok_or_else(|| err(0, "missing `field` declaration"))?;
    if vertices.is_empty() {
        return Err(err(0, "no vertices declared"));
    }
    let relations = raw_rels
        .into_iter()
        .map(|(_, terms)| Relation {
            terms: terms
                .into_iter()
                .map(|(k, path)| Term {
                    coeff: field.reduce(k),
                    path,
                })
                .collect(),
        })
        .collect();
    let quiver = Quiver::new(vertices, arrows)?;
    Ok(BoundQuiverSpec {
        field,
        quiver,
        relations,
    })
}

fn endpoints(path: &[usize], arrows: &[Arrow]) -> (usize, usize) {
    (arrows[path[0]].source, arrows[*path.last().unwrap()].target)
}

fn parse_term(ln: usize, term: &str, arrows: &[Arrow]) -> Result<(i64, Vec<usize>)> {
    let (coeff, word) = match term.split_once('*') {
        Some((k, w)) => (
            k.parse::<i64>()
                .map_err(|_| err(ln, format!("bad coefficient {k}")))?,
            w,
        ),
        None => (1, term),
    };
    if word.is_empty() {
        return Err(err(ln, "empty path"));
    }
    let mut path = Vec::new();
    for label in word.split('.') {
        let a = arrows
            .iter()
            .position(|a| a.label == label)
            .ok_or_else(|| err(ln, format!("unknown arrow {label}")))?;
        if let Some(&prev) = path.last() {
            let prev: usize = prev;
            if arrows[prev].target != arrows[a].source {
                return Err(err(
                    ln,
                    format!(
                        "non-composable path: {} ends at {} but {} starts at {}",
                        arrows[prev].label, arrows[prev].target, label, arrows[a].source
                    ),
                ));
            }
        }
        path.push(a);
    }
    if path.len() < 2 {
        return Err(err(ln, "relation path too short"));
    }
    Ok((coeff, path))
}

/// Writes a spec back in the file format, with normalized coefficients.
pub fn render_spec(spec: &BoundQuiverSpec) -> String {
    let q = &spec.quiver;
    let mut out = format!("field {}\n", spec.field.p());
    for v in &q.vertices {
        out += &format!("vertex {v}\n");
    }
    for a in &q.arrows {
        out += &format!(
            "arrow {} {} {}\n",
            a.label, q.vertices[a.source], q.vertices[a.target]
        );
    }
    for r in &spec.relations {
        let terms: Vec<String> = r
            .terms
            .iter()
            .map(|t| {
                let w: Vec<&str> = t.path.iter().map(|&a| q.arrows[a].label.as_str()).collect();
                if t.coeff == 1 {
                    w.join(".")
                } else {
                    format!("{}*{}", t.coeff, w.join("."))
                }
            })
            .collect();
        out += &format!("rel {}\n", terms.join(" + "));
    }
    out
}
