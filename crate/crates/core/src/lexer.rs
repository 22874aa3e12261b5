//! Lossless tokenizer for host-language source text.
//!
//! Every token carries the whitespace that precedes it, so concatenating
//! `leading_trivia + text` over a [`TokenStream`] (plus its trailing trivia)
//! reproduces the input exactly. Directive comments (`/*C ... */`) are always
//! scanned as single tokens, whichever [`TokenizerMode`] is active.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// 1-based position in the source text. Columns count characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl Location {
    pub fn new(line: usize, column: usize) -> Self {
        Location { line, column }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Punct,
    StringLit,
    DirectiveComment,
    PlainComment,
}

impl TokenKind {
    pub fn name(self) -> &'static str {
        match self {
            TokenKind::Word => "Word",
            TokenKind::Punct => "Punct",
            TokenKind::StringLit => "StringLit",
            TokenKind::DirectiveComment => "DirectiveComment",
            TokenKind::PlainComment => "PlainComment",
        }
    }

    pub fn is_comment(self) -> bool {
        matches!(self, TokenKind::DirectiveComment | TokenKind::PlainComment)
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How non-comment text is split into tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TokenizerMode {
    /// Maximal runs of non-whitespace.
    #[default]
    Space,
    /// Identifiers, numbers, string literals and single punctuation characters.
    Lexical,
}

impl FromStr for TokenizerMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "space" => Ok(TokenizerMode::Space),
            "lexical" => Ok(TokenizerMode::Lexical),
            other => Err(format!("unknown tokenizer mode `{other}` (expected `space` or `lexical`)")),
        }
    }
}

impl fmt::Display for TokenizerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenizerMode::Space => f.write_str("space"),
            TokenizerMode::Lexical => f.write_str("lexical"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub leading_trivia: String,
    pub text: String,
    pub kind: TokenKind,
    /// Position of the first character of `text`.
    pub location: Location,
}

impl Token {
    pub fn is_directive(&self) -> bool {
        self.kind == TokenKind::DirectiveComment
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
    pub trailing_trivia: String,
}

impl TokenStream {
    pub fn texts(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }

    pub fn render(&self) -> String {
        render(self)
    }

    /// Replaces the text of every non-comment token for which `rename`
    /// returns a new spelling. Trivia and comments are left untouched, which
    /// is how a rename refactoring sees a template.
    pub fn rename<F>(&self, mut rename: F) -> TokenStream
    where
        F: FnMut(&str) -> Option<String>,
    {
        let tokens = self
            .tokens
            .iter()
            .map(|tok| {
                let mut tok = tok.clone();
                if !tok.kind.is_comment() {
                    if let Some(new_text) = rename(&tok.text) {
                        tok.text = new_text;
                    }
                }
                tok
            })
            .collect();
        TokenStream {
            tokens,
            trailing_trivia: self.trailing_trivia.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("{location}: unterminated directive comment (missing `*/`)")]
    UnterminatedDirective { location: Location },
    #[error("{location}: unterminated string literal")]
    UnterminatedString { location: Location },
}

impl LexError {
    pub fn location(&self) -> Location {
        match self {
            LexError::UnterminatedDirective { location }
            | LexError::UnterminatedString { location } => *location,
        }
    }
}

pub fn is_trivia(c: char) -> bool {
    matches!(c, ' ' | '\t' | '\r' | '\n')
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c)) && chars.all(is_ident_continue)
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src,
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_nth(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn location(&self) -> Location {
        Location::new(self.line, self.column)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn bump_while(&mut self, mut pred: impl FnMut(char) -> bool) {
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            self.bump();
        }
    }

    /// Advances past `n` bytes; `n` must land on a char boundary.
    fn bump_bytes(&mut self, n: usize) {
        let end = self.pos + n;
        while self.pos < end {
            self.bump();
        }
    }
}

/// Splits `source` into a lossless [`TokenStream`].
pub fn tokenize(source: &str, mode: TokenizerMode) -> Result<TokenStream, LexError> {
    let mut cur = Cursor::new(source);
    let mut tokens = Vec::new();

    loop {
        let trivia_start = cur.pos;
        cur.bump_while(is_trivia);
        let leading_trivia = &source[trivia_start..cur.pos];
        if cur.peek().is_none() {
            return Ok(TokenStream {
                tokens,
                trailing_trivia: leading_trivia.to_owned(),
            });
        }

        let location = cur.location();
        let start = cur.pos;
        let kind = match scan_comment(&mut cur)? {
            Some(kind) => kind,
            None => match mode {
                TokenizerMode::Space => scan_space_run(&mut cur),
                TokenizerMode::Lexical => scan_lexical(&mut cur)?,
            },
        };
        tokens.push(Token {
            leading_trivia: leading_trivia.to_owned(),
            text: source[start..cur.pos].to_owned(),
            kind,
            location,
        });
    }
}

/// Scans a comment at the cursor, if one starts there.
fn scan_comment(cur: &mut Cursor<'_>) -> Result<Option<TokenKind>, LexError> {
    let rest = cur.rest();
    if let Some(body) = rest.strip_prefix("/*C") {
        let location = cur.location();
        match body.find("*/") {
            Some(idx) => cur.bump_bytes(3 + idx + 2),
            None => return Err(LexError::UnterminatedDirective { location }),
        }
        Ok(Some(TokenKind::DirectiveComment))
    } else if let Some(body) = rest.strip_prefix("/*") {
        // An unclosed plain comment swallows the rest of the input.
        match body.find("*/") {
            Some(idx) => cur.bump_bytes(2 + idx + 2),
            None => cur.bump_bytes(rest.len()),
        }
        Ok(Some(TokenKind::PlainComment))
    } else if rest.starts_with("//") {
        let line = rest.split('\n').next().unwrap_or(rest);
        let line = line.strip_suffix('\r').unwrap_or(line);
        cur.bump_bytes(line.len());
        Ok(Some(TokenKind::PlainComment))
    } else {
        Ok(None)
    }
}

fn starts_comment(rest: &str) -> bool {
    rest.starts_with("/*") || rest.starts_with("//")
}

fn scan_space_run(cur: &mut Cursor<'_>) -> TokenKind {
    let start = cur.pos;
    while let Some(c) = cur.peek() {
        if is_trivia(c) || (cur.pos > start && starts_comment(cur.rest())) {
            break;
        }
        cur.bump();
    }
    let text = &cur.src[start..cur.pos];
    if text.len() >= 2 && text.starts_with('"') && text.ends_with('"') {
        TokenKind::StringLit
    } else if text.chars().any(is_ident_continue) {
        TokenKind::Word
    } else {
        TokenKind::Punct
    }
}

fn scan_lexical(cur: &mut Cursor<'_>) -> Result<TokenKind, LexError> {
    let c = cur.peek().expect("caller checked for end of input");
    if is_ident_start(c) {
        cur.bump_while(is_ident_continue);
        Ok(TokenKind::Word)
    } else if c.is_ascii_digit() {
        scan_number(cur);
        Ok(TokenKind::Word)
    } else if c == '"' {
        scan_string(cur)?;
        Ok(TokenKind::StringLit)
    } else {
        cur.bump();
        Ok(TokenKind::Punct)
    }
}

// Digits, letters and underscores (suffixes, hex), plus a '.' when a digit follows.
fn scan_number(cur: &mut Cursor<'_>) {
    while let Some(c) = cur.peek() {
        if is_ident_continue(c) || (c == '.' && cur.peek_nth(1).is_some_and(|d| d.is_ascii_digit())) {
            cur.bump();
        } else {
            break;
        }
    }
}

fn scan_string(cur: &mut Cursor<'_>) -> Result<(), LexError> {
    let location = cur.location();
    cur.bump();
    loop {
        match cur.peek() {
            None | Some('\n') => return Err(LexError::UnterminatedString { location }),
            Some('"') => {
                cur.bump();
                return Ok(());
            }
            Some('\\') => {
                cur.bump();
                if matches!(cur.peek(), None | Some('\n')) {
                    return Err(LexError::UnterminatedString { location });
                }
                cur.bump();
            }
            Some(_) => {
                cur.bump();
            }
        }
    }
}

/// Concatenates every token with its leading trivia, then the trailing trivia.
pub fn render(stream: &TokenStream) -> String {
    let len = stream
        .tokens
        .iter()
        .map(|t| t.leading_trivia.len() + t.text.len())
        .sum::<usize>()
        + stream.trailing_trivia.len();
    let mut out = String::with_capacity(len);
    for tok in &stream.tokens {
        out.push_str(&tok.leading_trivia);
        out.push_str(&tok.text);
    }
    out.push_str(&stream.trailing_trivia);
    out
}

/// Escapes backslash, tab, CR and LF so a string fits on one dump line.
pub fn escape_dump(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

/// One line per token: `<kind>\t<escaped trivia>\t<escaped text>\n`.
pub fn dump_tokens(stream: &TokenStream) -> String {
    let mut out = String::new();
    for tok in &stream.tokens {
        out.push_str(tok.kind.name());
        out.push('\t');
        out.push_str(&escape_dump(&tok.leading_trivia));
        out.push('\t');
        out.push_str(&escape_dump(&tok.text));
        out.push('\n');
    }
    out
}
