//! Grammar of the text inside a `/*C ... */` comment.
//!
//! ```text
//! hole    := piece (ws piece)*          piece := (literal | '%' ident '%')+
//! forall  := "forall" ident "in" ident ["sep" quoted]
//! if      := "if" ident [("==" | "!=") quoted]
//! end     := "end"
//! ```

use std::fmt;

use crate::lexer::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternPiece {
    Literal(String),
    Var(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareOp {
    Eq,
    Ne,
}

impl fmt::Display for CompareOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompareOp::Eq => f.write_str("=="),
            CompareOp::Ne => f.write_str("!="),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub op: CompareOp,
    pub literal: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Directive {
    Hole(Vec<PatternPiece>),
    Forall {
        loop_var: String,
        list_key: String,
        sep: Option<String>,
    },
    If {
        key: String,
        comparison: Option<Comparison>,
    },
    End,
}

impl Directive {
    pub fn is_block_open(&self) -> bool {
        matches!(self, Directive::Forall { .. } | Directive::If { .. })
    }
}

/// Strips the `/*C` and `*/` delimiters and surrounding whitespace.
pub fn directive_interior(comment: &str) -> &str {
    let inner = comment.strip_prefix("/*C").unwrap_or(comment);
    let inner = inner.strip_suffix("*/").unwrap_or(inner);
    inner.trim()
}

/// Parses the interior of a directive comment. The error is a bare message;
/// callers attach the location of the comment.
pub fn parse_directive(interior: &str) -> Result<Directive, String> {
    let interior = interior.trim();
    if interior.is_empty() {
        return Err("empty directive".to_owned());
    }
    let first = interior.split_whitespace().next().unwrap_or_default();
    match first {
        "forall" => parse_forall(&block_words(interior)?),
        "if" => parse_if(&block_words(interior)?),
        "end" => {
            if interior == "end" {
                Ok(Directive::End)
            } else {
                Err(format!("unexpected text after `end`: `{}`", interior[3..].trim()))
            }
        }
        _ => parse_hole(interior).map(Directive::Hole),
    }
}

fn parse_hole(interior: &str) -> Result<Vec<PatternPiece>, String> {
    let mut pieces: Vec<PatternPiece> = Vec::new();
    let push_literal = |pieces: &mut Vec<PatternPiece>, s: &str| {
        if s.is_empty() {
            return;
        }
        match pieces.last_mut() {
            Some(PatternPiece::Literal(prev)) => prev.push_str(s),
            _ => pieces.push(PatternPiece::Literal(s.to_owned())),
        }
    };

    for word in interior.split_whitespace() {
        let mut rest = word;
        while let Some(open) = rest.find('%') {
            push_literal(&mut pieces, &rest[..open]);
            let after = &rest[open + 1..];
            let close = after
                .find('%')
                .ok_or_else(|| format!("unbalanced `%` in pattern `{word}`"))?;
            let key = &after[..close];
            if !is_identifier(key) {
                return Err(format!("invalid placeholder `%{key}%` in pattern `{word}`"));
            }
            pieces.push(PatternPiece::Var(key.to_owned()));
            rest = &after[close + 1..];
        }
        push_literal(&mut pieces, rest);
    }
    Ok(pieces)
}

#[derive(Debug, PartialEq)]
enum Word {
    Bare(String),
    Quoted(String),
}

fn block_words(interior: &str) -> Result<Vec<Word>, String> {
    let mut words = Vec::new();
    let mut chars = interior.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '"' {
            chars.next();
            let mut value = String::new();
            loop {
                match chars.next() {
                    None => return Err("unterminated quoted string".to_owned()),
                    Some('"') => break,
                    Some('\\') => match chars.next() {
                        Some('"') => value.push('"'),
                        Some('\\') => value.push('\\'),
                        Some('n') => value.push('\n'),
                        Some('t') => value.push('\t'),
                        Some(other) => return Err(format!("unknown escape `\\{other}`")),
                        None => return Err("unterminated quoted string".to_owned()),
                    },
                    Some(other) => value.push(other),
                }
            }
            words.push(Word::Quoted(value));
        } else {
            let mut value = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() {
                    break;
                }
                value.push(c);
                chars.next();
            }
            words.push(Word::Bare(value));
        }
    }
    Ok(words)
}

fn ident<'a>(word: Option<&'a Word>, what: &str) -> Result<&'a str, String> {
    match word {
        Some(Word::Bare(s)) if is_identifier(s) => Ok(s),
        Some(Word::Bare(s)) => Err(format!("expected {what}, found `{s}`")),
        Some(Word::Quoted(s)) => Err(format!("expected {what}, found quoted \"{s}\"")),
        None => Err(format!("expected {what}")),
    }
}

fn quoted<'a>(word: Option<&'a Word>, after: &str) -> Result<&'a str, String> {
    match word {
        Some(Word::Quoted(s)) => Ok(s),
        _ => Err(format!("expected a quoted string after `{after}`")),
    }
}

fn keyword(word: Option<&Word>, kw: &str) -> Result<(), String> {
    match word {
        Some(Word::Bare(s)) if s == kw => Ok(()),
        Some(Word::Bare(s)) => Err(format!("expected `{kw}`, found `{s}`")),
        _ => Err(format!("expected `{kw}`")),
    }
}

fn parse_forall(words: &[Word]) -> Result<Directive, String> {
    let mut it = words.iter().skip(1);
    let loop_var = ident(it.next(), "loop variable after `forall`")?;
    keyword(it.next(), "in")?;
    let list_key = ident(it.next(), "list key after `in`")?;
    if loop_var == list_key {
        return Err(format!("loop variable `{loop_var}` must differ from the list key"));
    }
    let sep = match it.next() {
        None => None,
        Some(word) => {
            keyword(Some(word), "sep")?;
            Some(quoted(it.next(), "sep")?.to_owned())
        }
    };
    if let Some(extra) = it.next() {
        return Err(format!("unexpected trailing input in forall: {extra:?}"));
    }
    Ok(Directive::Forall {
        loop_var: loop_var.to_owned(),
        list_key: list_key.to_owned(),
        sep,
    })
}

fn parse_if(words: &[Word]) -> Result<Directive, String> {
    let mut it = words.iter().skip(1);
    let key = ident(it.next(), "key after `if`")?;
    let comparison = match it.next() {
        None => None,
        Some(Word::Bare(op)) if op == "==" || op == "!=" => {
            let op = if op == "==" { CompareOp::Eq } else { CompareOp::Ne };
            let literal = quoted(it.next(), &op.to_string())?.to_owned();
            Some(Comparison { op, literal })
        }
        Some(other) => return Err(format!("expected `==` or `!=`, found {other:?}")),
    };
    if let Some(extra) = it.next() {
        return Err(format!("unexpected trailing input in if: {extra:?}"));
    }
    Ok(Directive::If {
        key: key.to_owned(),
        comparison,
    })
}
