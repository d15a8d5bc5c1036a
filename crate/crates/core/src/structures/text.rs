//! Text formats.
//!
//! A structure:
//!
//! ```text
//! universe = a b c
//! le/2: (a,a) (a,b) (b,b)
//! ```
//!
//! An embedding file holds `[source]`, `[target]` and `[map]` sections; the
//! map section lists `x -> y` pairs, one per line or comma separated.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::{is_embedding, FiniteStructure};
use crate::error::{malformed, Error, Result};

impl fmt::Display for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "universe =")?;
        for l in self.labels() {
            write!(f, " {l}")?;
        }
        for (r, (name, arity)) in self.signature().iter().enumerate() {
            write!(f, "\n{name}/{arity}:")?;
            for t in self.relation(r) {
                let names: Vec<&str> = t.iter().map(|&x| self.labels()[x].as_str()).collect();
                write!(f, " ({})", names.join(","))?;
            }
        }
        Ok(())
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

impl FromStr for FiniteStructure {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(strip_comment).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Malformed("empty structure".into()))?;
        let rest = header
            .strip_prefix("universe")
            .map(str::trim_start)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| Error::Malformed("expected `universe = ...`".into()))?;
        let labels: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if l.contains([',', '(', ')', ':', '/']) {
                return malformed(format!("label `{l}` contains a reserved character"));
            }
            if index.insert(l.clone(), i).is_some() {
                return malformed(format!("label `{l}` repeated"));
            }
        }

        let mut parsed: Vec<(String, usize, Vec<Vec<usize>>)> = Vec::new();
        for line in lines {
            let (head, body) = line
                .split_once(':')
                .ok_or_else(|| Error::Malformed(format!("expected `R/k: ...`, got `{line}`")))?;
            let (name, arity) = head.trim().split_once('/').ok_or_else(|| {
                Error::Malformed(format!("relation header `{head}` lacks `/arity`"))
            })?;
            let name = name.trim().to_string();
            if name.is_empty() || parsed.iter().any(|(n, _, _)| *n == name) {
                return malformed(format!("bad or repeated relation name `{name}`"));
            }
            let arity = crate::categories::parse_natural(arity)?;
            let mut tuples = Vec::new();
            let mut body = body.trim();
            while !body.is_empty() {
                let inner = body
                    .strip_prefix('(')
                    .and_then(|b| b.split_once(')'))
                    .ok_or_else(|| Error::Malformed(format!("bad tuple list in `{line}`")))?;
                let tuple: Vec<usize> = if inner.0.trim().is_empty() {
                    Vec::new()
                } else {
                    inner
                        .0
                        .split(',')
                        .map(|x| {
                            index.get(x.trim()).copied().ok_or_else(|| {
                                Error::Malformed(format!("unknown element `{}`", x.trim()))
                            })
                        })
                        .collect::<Result<_>>()?
                };
                tuples.push(tuple);
                body = inner.1.trim_start();
            }
            parsed.push((name, arity, tuples));
        }

        let signature = parsed.iter().map(|(n, a, _)| (n.clone(), *a)).collect();
        let mut s = FiniteStructure::with_labels(labels, signature);
        for (r, (_, _, tuples)) in parsed.into_iter().enumerate() {
            for t in tuples {
                s.add_tuple(r, t)?;
            }
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingFile {
    pub source: FiniteStructure,
    pub target: FiniteStructure,
    pub map: Vec<usize>,
}

impl fmt::Display for EmbeddingFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[source]\n{}", self.source)?;
        writeln!(f, "[target]\n{}", self.target)?;
        writeln!(f, "[map]")?;
        for (x, &y) in self.map.iter().enumerate() {
            writeln!(
                f,
                "{} -> {}",
                self.source.labels()[x],
                self.target.labels()[y]
            )?;
        }
        Ok(())
    }
}

/// Parses an embedding file and checks the map is an embedding.
pub fn parse_embedding_file(text: &str) -> Result<EmbeddingFile> {
    let mut sections: HashMap<&str, String> = HashMap::new();
    let mut current: Option<&str> = None;
    for raw in text.lines() {
        let line = strip_comment(raw);
        match line {
            "[source]" | "[target]" | "[map]" => {
                let name = &line[1..line.len() - 1];
                if sections.contains_key(name) {
                    return malformed(format!("section `{line}` repeated"));
                }
                sections.insert(name, String::new());
                current = Some(name);
            }
            "" => {}
            _ => match current {
                Some(name) => {
                    let buf = sections.get_mut(name).expect("section exists");
                    buf.push_str(line);
                    buf.push('\n');
                }
                None => return malformed(format!("text `{line}` before the first section")),
            },
        }
    }
    let take = |name: &str| {
        sections
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Malformed(format!("missing `[{name}]` section")))
    };
    let source: FiniteStructure = take("source")?.parse()?;
    let target: FiniteStructure = take("target")?.parse()?;
    let mut map = vec![None; source.size()];
    for pair in take("map")?
        .split([',', '\n'])
        .map(str::trim)
        .filter(|p| !p.is_empty())
    {
        let (x, y) = pair
            .split_once("->")
            .ok_or_else(|| Error::Malformed(format!("map entry `{pair}` lacks `->`")))?;
        let xi = source
            .labels()
            .iter()
            .position(|l| l == x.trim())
            .ok_or_else(|| Error::Malformed(format!("unknown source element `{}`", x.trim())))?;
        let yi = target
            .labels()
            .iter()
            .position(|l| l == y.trim())
            .ok_or_else(|| Error::Malformed(format!("unknown target element `{}`", y.trim())))?;
        if map[xi].replace(yi).is_some() {
            return malformed(format!("element `{}` mapped twice", x.trim()));
        }
    }
    let map: Vec<usize> = map
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            m.ok_or_else(|| Error::Malformed(format!("element `{}` unmapped", source.labels()[i])))
        })
        .collect::<Result<_>>()?;
    if !is_embedding(&source, &target, &map) {
        return malformed("the map is not an embedding");
    }
    Ok(EmbeddingFile {
        source,
        target,
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::categories::CategoryKind;

    #[test]
    fn structure_round_trip() {
        let s = FiniteStructure::from_arrangement(CategoryKind::Ci, &[0, 2, 1]);
        let text = s.to_string();
        assert!(text.starts_with("universe = a b c\ncyclic/3: "));
        let back: FiniteStructure = text.parse().unwrap();
        assert_eq!(back, s);
        let bare: FiniteStructure = "universe = x y".parse().unwrap();
        assert_eq!(bare.size(), 2);
        assert!(bare.signature().is_empty());
    }

    #[test]
    fn structure_errors() {
        assert!("universe = a a".parse::<FiniteStructure>().is_err());
        assert!("universe = a\nR/2: (a)".parse::<FiniteStructure>().is_err());
        assert!("universe = a\nR/1: (b)".parse::<FiniteStructure>().is_err());
        assert!("R/1: (a)".parse::<FiniteStructure>().is_err());
    }

    #[test]
    fn embedding_file() {
        let text = "[source]\nuniverse = a\nle/2: (a,a)\n[target]\nuniverse = a b\nle/2: (a,a) (a,b) (b,b)\n[map]\na -> b\n";
        let e = parse_embedding_file(text).unwrap();
        assert_eq!(e.map, vec![1]);
        assert_eq!(parse_embedding_file(&e.to_string()).unwrap(), e);
        let bad = text.replace("(a,b) ", "");
        assert!(parse_embedding_file(&bad).is_ok());
        let not_emb = text
            .replace("[map]\na -> b", "[map]\na -> a")
            .replace("(a,a) (a,b)", "(a,b)");
        assert!(parse_embedding_file(&not_emb).is_err());
    }
}
