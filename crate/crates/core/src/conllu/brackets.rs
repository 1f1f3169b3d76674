//! The bracket grammar of the MISC `Entity` attribute.
//!
//! An `Entity` value is a concatenation of bracket tokens:
//!
//! * `(eid[i/n]-field-field…` opens a mention (part),
//! * `(eid[i/n]-field…)` opens and closes a single-node mention,
//! * `eid[i/n])` closes a mention (part).
//!
//! Opening fields run until the next `(` or `)`, so a closing bracket can
//! never directly follow an unterminated opening one. The writer therefore
//! emits closings first, then single-node mentions, then openings.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BracketKind {
    Open,
    Close,
    OpenClose,
}

/// Index `i` of `n` parts of a discontinuous mention (`[i/n]`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartIndex {
    pub index: u16,
    pub count: u16,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EntityBracket {
    pub kind: BracketKind,
    pub eid: String,
    pub part: Option<PartIndex>,
    /// Hyphen-separated fields following the eid on opening brackets, verbatim.
    pub extra_fields: Vec<String>,
}

impl EntityBracket {
    pub fn open(eid: impl Into<String>, part: Option<PartIndex>, fields: Vec<String>) -> Self {
        EntityBracket {
            kind: BracketKind::Open,
            eid: eid.into(),
            part,
            extra_fields: fields,
        }
    }

    pub fn close(eid: impl Into<String>, part: Option<PartIndex>) -> Self {
        EntityBracket {
            kind: BracketKind::Close,
            eid: eid.into(),
            part,
            extra_fields: Vec::new(),
        }
    }

    pub fn single(eid: impl Into<String>, part: Option<PartIndex>, fields: Vec<String>) -> Self {
        EntityBracket {
            kind: BracketKind::OpenClose,
            eid: eid.into(),
            part,
            extra_fields: fields,
        }
    }

    /// Head-word index from the second opening field, when it is numeric.
    pub fn head_index(&self) -> Option<usize> {
        head_index_field(&self.extra_fields)
    }
}

pub(crate) fn head_index_field(fields: &[String]) -> Option<usize> {
    let f = fields.get(1)?;
    if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    f.parse().ok()
}

impl fmt::Display for PartIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}/{}]", self.index, self.count)
    }
}

impl fmt::Display for EntityBracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let write_id = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            f.write_str(&self.eid)?;
            if let Some(p) = self.part {
                write!(f, "{p}")?;
            }
            Ok(())
        };
        match self.kind {
            BracketKind::Close => {
                write_id(f)?;
                f.write_str(")")
            }
            BracketKind::Open | BracketKind::OpenClose => {
                f.write_str("(")?;
                write_id(f)?;
                for field in &self.extra_fields {
                    f.write_str("-")?;
                    f.write_str(field)?;
                }
                if self.kind == BracketKind::OpenClose {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// Serialize a bracket sequence back into an `Entity` value.
pub fn format_entity_value(brackets: &[EntityBracket]) -> String {
    let mut out = String::new();
    for b in brackets {
        use fmt::Write;
        let _ = write!(out, "{b}");
    }
    out
}

fn parse_eid_part(s: &str) -> Result<(String, Option<PartIndex>), String> {
    if s.is_empty() {
        return Err("empty entity id".into());
    }
    if let Some(stripped) = s.strip_suffix(']') {
        let open = stripped
            .rfind('[')
            .ok_or_else(|| format!("unmatched `]` in `{s}`"))?;
        let eid = &stripped[..open];
        let part = &stripped[open + 1..];
        let (i, n) = part
            .split_once('/')
            .ok_or_else(|| format!("part index `{part}` is not of the form i/n"))?;
        let index: u16 = i
            .parse()
            .map_err(|_| format!("bad part index `{part}`"))?;
        let count: u16 = n
            .parse()
            .map_err(|_| format!("bad part index `{part}`"))?;
        if count < 2 || index < 1 || index > count {
            return Err(format!("part index `{part}` out of range"));
        }
        if eid.is_empty() {
            return Err("empty entity id".into());
        }
        check_eid(eid)?;
        Ok((eid.to_string(), Some(PartIndex { index, count })))
    } else {
        check_eid(s)?;
        Ok((s.to_string(), None))
    }
}

fn check_eid(eid: &str) -> Result<(), String> {
    if eid.contains(['[', ']', '(', ')', '-', '|', '=']) || eid.contains(char::is_whitespace) {
        return Err(format!("invalid entity id `{eid}`"));
    }
    Ok(())
}

/// Tokenize an `Entity` attribute value.
pub fn parse_entity_value(value: &str) -> Result<Vec<EntityBracket>, String> {
    let bytes = value.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    if value.is_empty() {
        return Err("empty Entity value".into());
    }
    while i < bytes.len() {
        if bytes[i] == b'(' {
            let start = i + 1;
            let end = value[start..]
                .find(['(', ')'])
                .map(|p| start + p)
                .unwrap_or(bytes.len());
            let content = &value[start..end];
            let (id_part, fields) = match content.split_once('-') {
                Some((id, rest)) => (id, rest.split('-').map(str::to_string).collect()),
                None => (content, Vec::new()),
            };
            let (eid, part) = parse_eid_part(id_part)?;
            if end < bytes.len() && bytes[end] == b')' {
                out.push(EntityBracket::single(eid, part, fields));
                i = end + 1;
            } else {
                out.push(EntityBracket::open(eid, part, fields));
                i = end;
            }
        } else {
            let end = value[i..]
                .find(')')
                .map(|p| i + p)
                .ok_or_else(|| format!("unterminated closing bracket in `{value}`"))?;
            let content = &value[i..end];
            if content.contains('(') {
                return Err(format!("malformed closing bracket `{content})`"));
            }
            let (eid, part) = parse_eid_part(content)?;
            out.push(EntityBracket::close(eid, part));
            i = end + 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_with_fields() {
        let b = parse_entity_value("(e5-person-1-").unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].kind, BracketKind::Open);
        assert_eq!(b[0].eid, "e5");
        assert_eq!(b[0].extra_fields, vec!["person", "1", ""]);
        assert_eq!(b[0].head_index(), Some(1));
        assert_eq!(format_entity_value(&b), "(e5-person-1-");
    }

    #[test]
    fn close_and_single() {
        let b = parse_entity_value("e5)").unwrap();
        assert_eq!(b, vec![EntityBracket::close("e5", None)]);
        let b = parse_entity_value("(e9)").unwrap();
        assert_eq!(b, vec![EntityBracket::single("e9", None, vec![])]);
    }

    #[test]
    fn discontinuous_parts() {
        let v = "(e7[1/2]-org-1-";
        let b = parse_entity_value(v).unwrap();
        assert_eq!(b[0].part, Some(PartIndex { index: 1, count: 2 }));
        assert_eq!(format_entity_value(&b), v);
        let b = parse_entity_value("e7[2/2])").unwrap();
        assert_eq!(b[0].kind, BracketKind::Close);
        assert_eq!(b[0].part, Some(PartIndex { index: 2, count: 2 }));
    }

    #[test]
    fn mixed_sequence_roundtrips() {
        for v in [
            "e1)e2)(e3-place-2)(e4--1-Gen",
            "(e1(e2-x)",
            "e3[1/3])(e3[2/3]",
            "(e1-",
            "(c12--1-MentionType=x)",
        ] {
            let b = parse_entity_value(v).unwrap();
            assert_eq!(format_entity_value(&b), v, "{v}");
        }
    }

    #[test]
    fn rejects_malformed() {
        for v in ["", "(", "e1", "()", "(e1[0/2]", "(e1[3/2]", "(e1[1/1]", "e1(e2)", "(e1[x/2]"] {
            assert!(parse_entity_value(v).is_err(), "{v:?} should fail");
        }
    }

    #[test]
    fn head_index_requires_digits() {
        let b = parse_entity_value("(e1-person-x-").unwrap();
        assert_eq!(b[0].head_index(), None);
        let b = parse_entity_value("(e1--3)").unwrap();
        assert_eq!(b[0].head_index(), Some(3));
    }
}
