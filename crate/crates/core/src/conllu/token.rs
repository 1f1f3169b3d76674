use std::fmt;
use std::str::FromStr;

use super::brackets::{format_entity_value, parse_entity_value, EntityBracket};
use super::ParseErrorKind;

/// The ID column of a token line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TokenId {
    /// A syntactic word `n`, n >= 1.
    Word(u32),
    /// A multiword token range `a-b`.
    Range(u32, u32),
    /// An empty node `n.k`, k >= 1.
    Empty(u32, u32),
}

impl TokenId {
    pub fn is_range(self) -> bool {
        matches!(self, TokenId::Range(..))
    }

    pub fn is_empty_node(self) -> bool {
        matches!(self, TokenId::Empty(..))
    }

    /// Sort key placing `n.k` after word `n` and `0.k` before word 1.
    pub fn order_key(self) -> (u32, u32) {
        match self {
            TokenId::Word(n) => (n, 0),
            TokenId::Empty(n, k) => (n, k),
            TokenId::Range(a, _) => (a, 0),
        }
    }
}

fn parse_canonical_u32(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if s.len() > 1 && s.starts_with('0') {
        return None;
    }
    s.parse().ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenIdError(pub String);

impl fmt::Display for TokenIdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid token id `{}`", self.0)
    }
}

impl std::error::Error for TokenIdError {}

impl FromStr for TokenId {
    type Err = TokenIdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || TokenIdError(s.to_string());
        if let Some((a, b)) = s.split_once('-') {
            let a = parse_canonical_u32(a).ok_or_else(err)?;
            let b = parse_canonical_u32(b).ok_or_else(err)?;
            if a == 0 || b <= a {
                return Err(err());
            }
            Ok(TokenId::Range(a, b))
        } else if let Some((n, k)) = s.split_once('.') {
            let n = parse_canonical_u32(n).ok_or_else(err)?;
            let k = parse_canonical_u32(k).ok_or_else(err)?;
            if k == 0 {
                return Err(err());
            }
            Ok(TokenId::Empty(n, k))
        } else {
            match parse_canonical_u32(s) {
                Some(n) if n >= 1 => Ok(TokenId::Word(n)),
                _ => Err(err()),
            }
        }
    }
}

impl fmt::Display for TokenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TokenId::Word(n) => write!(f, "{n}"),
            TokenId::Range(a, b) => write!(f, "{a}-{b}"),
            TokenId::Empty(n, k) => write!(f, "{n}.{k}"),
        }
    }
}

/// Target of a HEAD or DEPS reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeadRef {
    Root,
    Node(TokenId),
}

fn parse_head_ref(s: &str) -> Option<HeadRef> {
    if s == "0" {
        return Some(HeadRef::Root);
    }
    match s.parse::<TokenId>() {
        Ok(id @ (TokenId::Word(_) | TokenId::Empty(..))) => Some(HeadRef::Node(id)),
        _ => None,
    }
}

const ID: usize = 0;
const FORM: usize = 1;
const LEMMA: usize = 2;
const UPOS: usize = 3;
const XPOS: usize = 4;
const FEATS: usize = 5;
const HEAD: usize = 6;
const DEPREL: usize = 7;
const DEPS: usize = 8;
const MISC: usize = 9;

/// One token line. The line is kept verbatim; columns are sliced on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    line: String,
    /// Byte offsets of the nine tab separators.
    tabs: [u32; 9],
    id: TokenId,
    brackets: Vec<EntityBracket>,
    line_no: usize,
}

impl Token {
    pub(crate) fn parse(line: &str, line_no: usize) -> Result<Token, ParseErrorKind> {
        let mut tabs = [0u32; 9];
        let mut n = 0;
        for (i, b) in line.bytes().enumerate() {
            if b == b'\t' {
                if n == 9 {
                    return Err(ParseErrorKind::ColumnCount(line.split('\t').count()));
                }
                tabs[n] = i as u32;
                n += 1;
            }
        }
        if n != 9 {
            return Err(ParseErrorKind::ColumnCount(n + 1));
        }
        let mut token = Token {
            line: line.to_string(),
            tabs,
            id: TokenId::Word(1),
            brackets: Vec::new(),
            line_no,
        };
        let id_str = token.col(ID);
        token.id = id_str
            .parse()
            .map_err(|_| ParseErrorKind::BadId(id_str.to_string()))?;

        if !token.id.is_range() {
            let head = token.head_raw();
            if head != "_" && parse_head_ref(head).is_none() {
                return Err(ParseErrorKind::BadHead(head.to_string()));
            }
            if token.id.is_empty_node() && head != "_" {
                return Err(ParseErrorKind::BadHead(head.to_string()));
            }
            if token.try_deps().is_none() {
                return Err(ParseErrorKind::BadDeps(token.deps_raw().to_string()));
            }
        }

        if let Some(value) = token.misc_get("Entity") {
            if token.id.is_range() {
                return Err(ParseErrorKind::EntityOnRange);
            }
            let value = value.to_string();
            token.brackets = parse_entity_value(&value)
                .map_err(|reason| ParseErrorKind::BadEntity { value, reason })?;
        }
        Ok(token)
    }

    fn col(&self, i: usize) -> &str {
        let start = if i == 0 { 0 } else { self.tabs[i - 1] as usize + 1 };
        let end = if i == 9 { self.line.len() } else { self.tabs[i] as usize };
        &self.line[start..end]
    }

    pub fn id(&self) -> TokenId {
        self.id
    }

    /// 1-based line number in the source file (0 for synthesized tokens).
    pub fn line_no(&self) -> usize {
        self.line_no
    }

    pub fn as_line(&self) -> &str {
        &self.line
    }

    pub fn form(&self) -> &str {
        self.col(FORM)
    }

    pub fn lemma(&self) -> &str {
        self.col(LEMMA)
    }

    pub fn upos(&self) -> &str {
        self.col(UPOS)
    }

    pub fn xpos(&self) -> &str {
        self.col(XPOS)
    }

    pub fn feats_raw(&self) -> &str {
        self.col(FEATS)
    }

    /// FEATS as ordered `name=value` pairs.
    pub fn feats(&self) -> impl Iterator<Item = (&str, &str)> {
        let raw = self.feats_raw();
        let raw = if raw == "_" { "" } else { raw };
        raw.split('|')
            .filter(|s| !s.is_empty())
            .map(|item| item.split_once('=').unwrap_or((item, "")))
    }

    pub fn feat(&self, name: &str) -> Option<&str> {
        self.feats().find(|(k, _)| *k == name).map(|(_, v)| v)
    }

    pub fn head_raw(&self) -> &str {
        self.col(HEAD)
    }

    /// Basic-tree parent; `None` when the column is `_`.
    pub fn head(&self) -> Option<HeadRef> {
        parse_head_ref(self.head_raw())
    }

    pub fn deprel(&self) -> &str {
        self.col(DEPREL)
    }

    pub fn deps_raw(&self) -> &str {
        self.col(DEPS)
    }

    fn try_deps(&self) -> Option<Vec<(HeadRef, &str)>> {
        let raw = self.deps_raw();
        if raw == "_" {
            return Some(Vec::new());
        }
        raw.split('|')
            .map(|item| {
                let (h, rel) = item.split_once(':')?;
                Some((parse_head_ref(h)?, rel))
            })
            .collect()
    }

    /// Enhanced dependencies as (parent, relation) pairs.
    pub fn deps(&self) -> Vec<(HeadRef, &str)> {
        self.try_deps().unwrap_or_default()
    }

    pub fn misc_raw(&self) -> &str {
        self.col(MISC)
    }

    /// MISC as ordered `name=value` items.
    pub fn misc(&self) -> impl Iterator<Item = (&str, &str)> {
        let raw = self.misc_raw();
        let raw = if raw == "_" { "" } else { raw };
        raw.split('|')
            .filter(|s| !s.is_empty())
            .map(|item| item.split_once('=').unwrap_or((item, "")))
    }

    pub fn misc_get(&self, name: &str) -> Option<&str> {
        self.misc().find(|(k, _)| *k == name).map(|(_, v)| v)
    }

    pub fn entity_brackets(&self) -> &[EntityBracket] {
        &self.brackets
    }

    /// Replace the `Entity` attribute. Other MISC items keep their order; a
    /// new `Entity` item is appended, an empty bracket list removes it.
    pub fn set_entity_brackets(&mut self, brackets: Vec<EntityBracket>) {
        if brackets.is_empty() && self.brackets.is_empty() && self.misc_get("Entity").is_none() {
            return;
        }
        let raw = self.misc_raw();
        let mut items: Vec<String> = if raw == "_" || raw.is_empty() {
            Vec::new()
        } else {
            raw.split('|').map(str::to_string).collect()
        };
        let pos = items.iter().position(|i| i.starts_with("Entity="));
        let value = (!brackets.is_empty()).then(|| format!("Entity={}", format_entity_value(&brackets)));
        match (pos, value) {
            (Some(p), Some(v)) => items[p] = v,
            (Some(p), None) => {
                items.remove(p);
            }
            (None, Some(v)) => items.push(v),
            (None, None) => {}
        }
        let misc = if items.is_empty() {
            "_".to_string()
        } else {
            items.join("|")
        };
        let prefix_end = self.tabs[8] as usize + 1;
        self.line.truncate(prefix_end);
        self.line.push_str(&misc);
        self.brackets = brackets;
    }
}
