//! Element files.
//!
//! Each line `KIND n s : [image] : polynomial` contributes `polynomial · ε`.
//! Consecutive lines form one element; a blank line ends it. A line `---`
//! ends a chain step. `#` starts a comment.

use super::field::Field;
use super::poly::Polynomial;
use super::presheaf::PresheafElement;
use crate::categories::{parse_index_list, parse_natural, CategoryKind};
use crate::error::{malformed, Error, Result};

/// Parses an element file into chain steps, each a list of elements.
pub fn parse_element_file(text: &str, field: Field) -> Result<Vec<Vec<PresheafElement>>> {
    let mut steps: Vec<Vec<PresheafElement>> = vec![Vec::new()];
    let mut current: Option<PresheafElement> = None;
    let flush = |current: &mut Option<PresheafElement>, steps: &mut Vec<Vec<PresheafElement>>| {
        if let Some(e) = current.take() {
            steps.last_mut().expect("one step").push(e);
        }
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let at = |e: Error| Error::Malformed(format!("line {}: {e}", lineno + 1));
        if line.is_empty() {
            flush(&mut current, &mut steps);
            continue;
        }
        if line == "---" {
            flush(&mut current, &mut steps);
            steps.push(Vec::new());
            continue;
        }
        let (kind, n, s, image, p) = parse_line(line, field).map_err(at)?;
        match &mut current {
            Some(e) if (e.kind(), e.n(), e.width()) == (kind, n, s) => {
                e.add_term(image, p).map_err(at)?;
            }
            Some(_) => {
                return Err(at(Error::Malformed(
                    "kind, n and s must agree within an element".into(),
                )))
            }
            None => {
                current =
                    Some(PresheafElement::basis_multiple(kind, n, s, image, p, field).map_err(at)?);
            }
        }
    }
    flush(&mut current, &mut steps);
    if steps.last().is_some_and(Vec::is_empty) && steps.len() > 1 {
        steps.pop();
    }
    Ok(steps)
}

fn parse_line(
    line: &str,
    field: Field,
) -> Result<(CategoryKind, usize, usize, Vec<usize>, Polynomial)> {
    let mut parts = line.splitn(3, ':');
    let head = parts.next().unwrap_or("");
    let (image, poly) = match (parts.next(), parts.next()) {
        (Some(i), Some(p)) => (i, p),
        _ => return malformed("expected `KIND n s : [image] : polynomial`"),
    };
    let words: Vec<&str> = head.split_whitespace().collect();
    if words.len() != 3 {
        return malformed(format!("expected `KIND n s`, got `{}`", head.trim()));
    }
    Ok((
        words[0].parse()?,
        parse_natural(words[1])?,
        parse_natural(words[2])?,
        parse_index_list(image)?,
        Polynomial::parse(poly, field)?,
    ))
}

/// Inverse of [`parse_element_file`].
pub fn write_element_file(steps: &[Vec<PresheafElement>]) -> String {
    let blocks: Vec<String> = steps
        .iter()
        .map(|step| {
            step.iter()
                .filter(|e| !e.is_zero())
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join("\n\n")
        })
        .collect();
    let mut out = blocks.join("\n---\n");
    out.push('\n');
    out
}
