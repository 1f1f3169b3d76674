//! CoNLL-U reading and writing with CorefUD `Entity` annotation.
//!
//! Parsing keeps every line verbatim, so writing an unmodified [`Corpus`]
//! reproduces the input bytes exactly.

mod brackets;
mod token;

use std::collections::HashMap;

use thiserror::Error;

pub use brackets::{
    format_entity_value, parse_entity_value, BracketKind, EntityBracket, PartIndex,
};
pub(crate) use brackets::head_index_field;
pub use token::{HeadRef, Token, TokenId, TokenIdError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected 10 tab-separated columns, found {0}")]
    ColumnCount(usize),
    #[error("invalid token id `{0}`")]
    BadId(String),
    #[error("invalid HEAD value `{0}`")]
    BadHead(String),
    #[error("invalid DEPS value `{0}`")]
    BadDeps(String),
    #[error("malformed Entity value `{value}`: {reason}")]
    BadEntity { value: String, reason: String },
    #[error("multiword token line carries an Entity annotation")]
    EntityOnRange,
    #[error("empty node `{0}` is out of order")]
    EmptyNodeOrder(String),
    #[error("comment line inside a token block")]
    CommentInsideSentence,
    #[error("closing bracket `{eid}` without a matching opening bracket (document {doc}, sentence {sent}, node {node})")]
    UnmatchedClose {
        eid: String,
        doc: String,
        sent: String,
        node: String,
    },
    #[error("bracket `{eid}` opened at node {node} of sentence {sent} is never closed in document {doc}")]
    Unclosed {
        eid: String,
        doc: String,
        sent: String,
        node: String,
    },
    #[error("entity `{eid}` opened again while still open without distinct part indices (document {doc}, sentence {sent}, node {node})")]
    DuplicateOpen {
        eid: String,
        doc: String,
        sent: String,
        node: String,
    },
    #[error("input is not valid UTF-8")]
    Utf8,
}

/// A parse failure with its 1-based source line (0 when not line-specific).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Sentence {
    /// Comment lines including the leading `#`.
    pub comments: Vec<String>,
    pub tokens: Vec<Token>,
    /// Number of blank lines following the sentence (normally 1).
    pub blank_lines_after: usize,
}

impl Sentence {
    pub fn comment_value(&self, key: &str) -> Option<&str> {
        self.comments.iter().find_map(|c| {
            let rest = c.strip_prefix('#')?.trim_start();
            let rest = rest.strip_prefix(key)?.trim_start();
            let value = rest.strip_prefix('=')?;
            Some(value.trim())
        })
    }

    pub fn sent_id(&self) -> Option<&str> {
        self.comment_value("sent_id")
    }

    fn starts_document(&self) -> bool {
        self.comments.iter().any(|c| {
            c.strip_prefix('#')
                .map(|r| r.trim_start().starts_with("newdoc"))
                .unwrap_or(false)
        })
    }

    /// Syntactic words and empty nodes, in file order.
    pub fn nodes(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| !t.id().is_range())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    /// Value of `# newdoc id = …`, if any.
    pub id: Option<String>,
    pub sentences: Vec<Sentence>,
}

impl Document {
    pub fn display_id(&self) -> &str {
        self.id.as_deref().unwrap_or("<no id>")
    }

    /// Number of syntactic words (empty nodes excluded).
    pub fn word_count(&self) -> usize {
        self.sentences
            .iter()
            .flat_map(|s| &s.tokens)
            .filter(|t| matches!(t.id(), TokenId::Word(_)))
            .count()
    }

    /// Checks that both documents have the same nodes (ids and forms).
    pub fn same_node_universe(&self, other: &Document) -> Result<(), String> {
        if self.sentences.len() != other.sentences.len() {
            return Err(format!(
                "document {}: {} vs {} sentences",
                self.display_id(),
                self.sentences.len(),
                other.sentences.len()
            ));
        }
        for (i, (a, b)) in self.sentences.iter().zip(&other.sentences).enumerate() {
            let mut na = a.nodes();
            let mut nb = b.nodes();
            loop {
                match (na.next(), nb.next()) {
                    (None, None) => break,
                    (Some(x), Some(y)) if x.id() == y.id() && x.form() == y.form() => {}
                    (x, y) => {
                        let show = |t: Option<&Token>| {
                            t.map(|t| format!("{} `{}`", t.id(), t.form()))
                                .unwrap_or_else(|| "end of sentence".into())
                        };
                        return Err(format!(
                            "document {}, sentence {}: node mismatch ({} vs {})",
                            self.display_id(),
                            a.sent_id().map(str::to_string).unwrap_or_else(|| (i + 1).to_string()),
                            show(x),
                            show(y)
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A parsed file: documents plus the layout needed for byte-exact output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub leading_blank_lines: usize,
    pub trailing_newline: bool,
}

impl Default for Corpus {
    fn default() -> Self {
        Corpus {
            documents: Vec::new(),
            leading_blank_lines: 0,
            trailing_newline: true,
        }
    }
}

impl Corpus {
    pub fn word_count(&self) -> usize {
        self.documents.iter().map(Document::word_count).sum()
    }
}

/// Parse a CoNLL-U byte stream.
pub fn parse_file(bytes: &[u8]) -> Result<Corpus, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ParseError {
        line: 0,
        kind: ParseErrorKind::Utf8,
    })?;
    parse_str(text)
}

pub fn parse_str(text: &str) -> Result<Corpus, ParseError> {
    let mut lines: Vec<&str> = text.split('\n').collect();
    let trailing_newline = lines.last() == Some(&"");
    if trailing_newline {
        lines.pop();
    }

    let mut corpus = Corpus {
        documents: Vec::new(),
        leading_blank_lines: 0,
        trailing_newline,
    };
    let mut sentences: Vec<Sentence> = Vec::new();
    let mut current: Option<Sentence> = None;

    for (idx, line) in lines.iter().enumerate() {
        let line_no = idx + 1;
        if line.is_empty() {
            match current.take() {
                Some(mut s) => {
                    s.blank_lines_after = 1;
                    sentences.push(s);
                }
                None => match sentences.last_mut() {
                    Some(prev) => prev.blank_lines_after += 1,
                    None => corpus.leading_blank_lines += 1,
                },
            }
            continue;
        }
        let sent = current.get_or_insert_with(Sentence::default);
        if line.starts_with('#') {
            if !sent.tokens.is_empty() {
                return Err(ParseError {
                    line: line_no,
                    kind: ParseErrorKind::CommentInsideSentence,
                });
            }
            sent.comments.push(line.to_string());
            continue;
        }
        let token = Token::parse(line, line_no).map_err(|kind| ParseError {
            line: line_no,
            kind,
        })?;
        if let TokenId::Empty(n, k) = token.id() {
            let prev = sent.tokens.iter().rev().find_map(|t| match t.id() {
                TokenId::Empty(pn, pk) if pn == n => Some(pk),
                _ => None,
            });
            if prev.is_some_and(|pk| pk >= k) {
                return Err(ParseError {
                    line: line_no,
                    kind: ParseErrorKind::EmptyNodeOrder(token.id().to_string()),
                });
            }
        }
        sent.tokens.push(token);
    }
    if let Some(s) = current.take() {
        sentences.push(s);
    }

    for sent in sentences {
        let new_doc = sent.starts_document() || corpus.documents.is_empty();
        if new_doc {
            let id = sent.comment_value("newdoc id").map(str::to_string);
            corpus.documents.push(Document {
                id,
                sentences: Vec::new(),
            });
        }
        corpus.documents.last_mut().unwrap().sentences.push(sent);
    }

    for doc in &corpus.documents {
        validate_brackets(doc)?;
    }
    Ok(corpus)
}

struct OpenBracket {
    sent: usize,
    line: usize,
    node: TokenId,
}

/// Every OPEN must be matched by a CLOSE with the same eid and part.
fn validate_brackets(doc: &Document) -> Result<(), ParseError> {
    let mut open: HashMap<(&str, Option<PartIndex>), OpenBracket> = HashMap::new();
    let sent_name = |i: usize| -> String {
        doc.sentences[i]
            .sent_id()
            .map(str::to_string)
            .unwrap_or_else(|| format!("#{}", i + 1))
    };
    for (si, sent) in doc.sentences.iter().enumerate() {
        for tok in sent.nodes() {
            for b in tok.entity_brackets() {
                let key = (b.eid.as_str(), b.part);
                match b.kind {
                    BracketKind::OpenClose => {}
                    BracketKind::Open => {
                        if open.contains_key(&key) {
                            return Err(ParseError {
                                line: tok.line_no(),
                                kind: ParseErrorKind::DuplicateOpen {
                                    eid: b.eid.clone(),
                                    doc: doc.display_id().to_string(),
                                    sent: sent_name(si),
                                    node: tok.id().to_string(),
                                },
                            });
                        }
                        open.insert(
                            key,
                            OpenBracket {
                                sent: si,
                                line: tok.line_no(),
                                node: tok.id(),
                            },
                        );
                    }
                    BracketKind::Close => match open.remove(&key) {
                        Some(o) => {
                            if o.sent != si {
                                log::warn!(
                                    "document {}: mention of `{}` spans sentences {} to {}",
                                    doc.display_id(),
                                    b.eid,
                                    sent_name(o.sent),
                                    sent_name(si)
                                );
                            }
                        }
                        None => {
                            return Err(ParseError {
                                line: tok.line_no(),
                                kind: ParseErrorKind::UnmatchedClose {
                                    eid: b.eid.clone(),
                                    doc: doc.display_id().to_string(),
                                    sent: sent_name(si),
                                    node: tok.id().to_string(),
                                },
                            })
                        }
                    },
                }
            }
        }
    }
    if let Some(((eid, part), o)) = open.into_iter().min_by_key(|(_, o)| o.line) {
        let eid = match part {
            Some(p) => format!("{eid}{p}"),
            None => eid.to_string(),
        };
        return Err(ParseError {
            line: o.line,
            kind: ParseErrorKind::Unclosed {
                eid,
                doc: doc.display_id().to_string(),
                sent: sent_name(o.sent),
                node: o.node.to_string(),
            },
        });
    }
    Ok(())
}

/// Serialize documents back to CoNLL-U text.
pub fn write_string(corpus: &Corpus) -> String {
    let mut lines: Vec<&str> = Vec::new();
    lines.extend(std::iter::repeat_n("", corpus.leading_blank_lines));
    for doc in &corpus.documents {
        for sent in &doc.sentences {
            lines.extend(sent.comments.iter().map(String::as_str));
            lines.extend(sent.tokens.iter().map(Token::as_line));
            lines.extend(std::iter::repeat_n("", sent.blank_lines_after));
        }
    }
    let mut out = lines.join("\n");
    if corpus.trailing_newline && !lines.is_empty() {
        out.push('\n');
    }
    out
}

pub fn write_file(corpus: &Corpus) -> Vec<u8> {
    write_string(corpus).into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = "# newdoc id = d1\n# sent_id = s1\n# text = The big dog barked\n\
1\tThe\tthe\tDET\t_\t_\t3\tdet\t_\tEntity=(e5-animal-3-\n\
2\tbig\tbig\tADJ\t_\t_\t3\tamod\t_\t_\n\
3\tdog\tdog\tNOUN\t_\tGender=Masc\t4\tnsubj\t_\tEntity=e5)\n\
4\tbarked\tbark\tVERB\t_\t_\t0\troot\t_\tSpaceAfter=No\n\
\n";

    #[test]
    fn roundtrip_is_byte_exact() {
        let c = parse_str(DOC).unwrap();
        assert_eq!(c.documents.len(), 1);
        assert_eq!(c.documents[0].id.as_deref(), Some("d1"));
        assert_eq!(write_string(&c), DOC);
    }

    #[test]
    fn roundtrip_odd_layouts() {
        for text in [
            "",
            "\n",
            "\n\n# newdoc id = x\n",
            "# newdoc id = a\n1\ta\ta\tX\t_\t_\t0\troot\t_\t_",
            "# newdoc id = a\n1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n\n\n\n",
        ] {
            let c = parse_str(text).unwrap();
            assert_eq!(write_string(&c), text, "{text:?}");
        }
    }

    #[test]
    fn header_only_document() {
        let text = "# newdoc id = empty\n# global.Entity = eid-etype-head-other\n\n";
        let c = parse_str(text).unwrap();
        assert_eq!(c.documents.len(), 1);
        assert!(c.documents[0].sentences[0].tokens.is_empty());
        assert_eq!(write_string(&c), text);
    }

    #[test]
    fn documents_split_on_newdoc() {
        let text = format!("{DOC}{}", DOC.replace("d1", "d2"));
        let c = parse_str(&text).unwrap();
        assert_eq!(c.documents.len(), 2);
        assert_eq!(c.documents[1].id.as_deref(), Some("d2"));
    }

    #[test]
    fn unbalanced_close_reports_location() {
        let text = "# newdoc id = d\n# sent_id = s9\n1\ta\ta\tX\t_\t_\t0\troot\t_\tEntity=e3)\n\n";
        let err = parse_str(text).unwrap_err();
        assert_eq!(err.line, 3);
        match err.kind {
            ParseErrorKind::UnmatchedClose { eid, doc, sent, node } => {
                assert_eq!((eid.as_str(), doc.as_str(), sent.as_str(), node.as_str()), ("e3", "d", "s9", "1"));
            }
            k => panic!("unexpected {k:?}"),
        }
    }

    #[test]
    fn unclosed_at_document_end() {
        let text = "# newdoc id = d\n1\ta\ta\tX\t_\t_\t0\troot\t_\tEntity=(e3\n\n# newdoc id = d2\n1\ta\ta\tX\t_\t_\t0\troot\t_\tEntity=e3)\n\n";
        let err = parse_str(text).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Unclosed { .. }));
    }

    #[test]
    fn duplicate_open_rejected() {
        let text = "1\ta\ta\tX\t_\t_\t0\troot\t_\tEntity=(e1\n2\tb\tb\tX\t_\t_\t1\tdep\t_\tEntity=(e1\n3\tc\tc\tX\t_\t_\t1\tdep\t_\tEntity=e1)e1)\n\n";
        let err = parse_str(text).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::DuplicateOpen { .. }));
    }

    #[test]
    fn distinct_parts_may_be_open_together() {
        let text = "1\ta\ta\tX\t_\t_\t0\troot\t_\tEntity=(e1[1/2]\n2\tb\tb\tX\t_\t_\t1\tdep\t_\tEntity=e1[1/2])\n3\tc\tc\tX\t_\t_\t1\tdep\t_\tEntity=(e1[2/2])\n\n";
        assert!(parse_str(text).is_ok());
    }

    #[test]
    fn cross_sentence_mention_accepted() {
        let text = "1\ta\ta\tX\t_\t_\t0\troot\t_\tEntity=(e1\n\n1\tb\tb\tX\t_\t_\t0\troot\t_\tEntity=e1)\n\n";
        assert!(parse_str(text).is_ok());
    }

    #[test]
    fn empty_nodes_must_increase() {
        let text = "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n1.2\tb\tb\tX\t_\t_\t_\t_\t1:dep\t_\n1.1\tc\tc\tX\t_\t_\t_\t_\t1:dep\t_\n\n";
        let err = parse_str(text).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(matches!(err.kind, ParseErrorKind::EmptyNodeOrder(_)));
    }

    #[test]
    fn bad_columns_and_ids() {
        assert!(matches!(
            parse_str("1\ta\n").unwrap_err().kind,
            ParseErrorKind::ColumnCount(2)
        ));
        assert!(matches!(
            parse_str("x\ta\ta\tX\t_\t_\t0\troot\t_\t_\n").unwrap_err().kind,
            ParseErrorKind::BadId(_)
        ));
        assert!(matches!(
            parse_file(&[0xff, 0xfe]).unwrap_err().kind,
            ParseErrorKind::Utf8
        ));
    }
}
