//! Binding-data files: flat `key = value;` records.
//!
//! ```text
//! # comment
//! name = Person;
//! fields = id, "first name", age;
//! ---
//! name = Address;
//! ```
//!
//! A value is either a double-quoted string (escapes `\"`, `\\`, `\n`) or a
//! bare run of characters up to the next `,` or `;`, trimmed. Several values
//! separated by commas form a list. A record ends at a `---` separator, or
//! when a key already present in the record is assigned again.

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::lexer::{is_identifier, Location};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Scalar(String),
    List(Vec<String>),
}

impl Value {
    pub fn as_scalar(&self) -> Option<&str> {
        match self {
            Value::Scalar(s) => Some(s),
            Value::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[String]> {
        match self {
            Value::Scalar(_) => None,
            Value::List(items) => Some(items),
        }
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Scalar(s.to_owned())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Scalar(s)
    }
}

impl<S: Into<String>> From<Vec<S>> for Value {
    fn from(items: Vec<S>) -> Self {
        Value::List(items.into_iter().map(Into::into).collect())
    }
}

/// One binding environment, in the order its keys were written.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Record {
    entries: IndexMap<String, Value>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn with(mut self, key: impl Into<String>, value: impl Into<Value>) -> Self {
        self.insert(key, value);
        self
    }

    /// Inserts or replaces `key`, returning the previous value.
    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<Value>) -> Option<Value> {
        self.entries.insert(key.into(), value.into())
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.get(key)
    }

    pub fn contains_key(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }
}

impl<K: Into<String>, V: Into<Value>> FromIterator<(K, V)> for Record {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        let mut record = Record::new();
        for (k, v) in iter {
            record.insert(k, v);
        }
        record
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DataError {
    #[error("{location}: {message}")]
    Syntax { location: Location, message: String },
    #[error("{location}: missing key before `=`")]
    EmptyKey { location: Location },
}

impl DataError {
    pub fn location(&self) -> Location {
        match self {
            DataError::Syntax { location, .. } | DataError::EmptyKey { location } => *location,
        }
    }

    pub fn line(&self) -> usize {
        self.location().line
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
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

    fn skip_while(&mut self, pred: impl Fn(char) -> bool) {
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
    }

    fn syntax<T>(&self, location: Location, message: impl Into<String>) -> Result<T, DataError> {
        Err(DataError::Syntax {
            location,
            message: message.into(),
        })
    }

    fn parse(mut self) -> Result<Vec<(Location, Record)>, DataError> {
        let mut records = Vec::new();
        let mut current = Record::new();
        let mut start = Location::default();

        loop {
            self.skip_while(char::is_whitespace);
            let Some(c) = self.peek() else { break };

            if c == '#' {
                self.skip_while(|c| c != '\n');
            } else if self.rest().starts_with("---") {
                let location = self.location();
                self.bump_n(3);
                if !matches!(self.peek(), None | Some('#')) && !self.peek().is_some_and(char::is_whitespace) {
                    return self.syntax(location, "record separator must be exactly `---`");
                }
                if !current.is_empty() {
                    records.push((start, std::mem::take(&mut current)));
                }
            } else {
                let location = self.location();
                let (key, value) = self.assignment()?;
                if current.contains_key(&key) {
                    records.push((start, std::mem::take(&mut current)));
                }
                if current.is_empty() {
                    start = location;
                }
                current.insert(key, value);
            }
        }

        if !current.is_empty() {
            records.push((start, current));
        }
        Ok(records)
    }

    fn bump_n(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn assignment(&mut self) -> Result<(String, Value), DataError> {
        let key_location = self.location();
        let start = self.pos;
        self.skip_while(|c| !c.is_whitespace() && c != '=');
        let key = &self.src[start..self.pos];
        if key.is_empty() {
            return Err(DataError::EmptyKey {
                location: key_location,
            });
        }
        if !is_identifier(key) {
            return self.syntax(key_location, format!("invalid key `{key}`"));
        }
        let key = key.to_owned();

        self.skip_while(|c| c == ' ' || c == '\t');
        if self.peek() != Some('=') {
            return self.syntax(self.location(), format!("expected `=` after key `{key}`"));
        }
        self.bump();

        let mut values = Vec::new();
        loop {
            self.skip_while(char::is_whitespace);
            values.push(self.value()?);
            self.skip_while(|c| c == ' ' || c == '\t' || c == '\r');
            match self.peek() {
                Some(',') => {
                    self.bump();
                }
                Some(';') => {
                    self.bump();
                    break;
                }
                _ => {
                    return self.syntax(self.location(), format!("missing `;` after value of `{key}`"));
                }
            }
        }

        let value = if values.len() == 1 {
            Value::Scalar(values.pop().expect("one value"))
        } else {
            Value::List(values)
        };
        Ok((key, value))
    }

    fn value(&mut self) -> Result<String, DataError> {
        let location = self.location();
        if self.peek() == Some('"') {
            self.bump();
            let mut out = String::new();
            loop {
                match self.bump() {
                    None | Some('\n') => return self.syntax(location, "unterminated quoted value"),
                    Some('"') => return Ok(out),
                    Some('\\') => match self.bump() {
                        Some('"') => out.push('"'),
                        Some('\\') => out.push('\\'),
                        Some('n') => out.push('\n'),
                        Some(other) if other != '\n' => {
                            return self.syntax(location, format!("unknown escape `\\{other}` in quoted value"))
                        }
                        _ => return self.syntax(location, "unterminated quoted value"),
                    },
                    Some(c) => out.push(c),
                }
            }
        }

        let start = self.pos;
        while let Some(c) = self.peek() {
            match c {
                ',' | ';' | '\n' => break,
                '"' => return self.syntax(self.location(), "quote inside an unquoted value"),
                _ => {
                    self.bump();
                }
            }
        }
        let value = self.src[start..self.pos].trim();
        if value.is_empty() {
            return self.syntax(location, "empty value (write \"\" for an empty string)");
        }
        Ok(value.to_owned())
    }
}

/// Parses a binding-data file into records, in file order.
pub fn parse_records(data: &str) -> Result<Vec<Record>, DataError> {
    Ok(parse_records_located(data)?.into_iter().map(|(_, r)| r).collect())
}

/// Like [`parse_records`], also returning where each record's first
/// assignment starts.
pub fn parse_records_located(data: &str) -> Result<Vec<(Location, Record)>, DataError> {
    Parser {
        src: data,
        pos: 0,
        line: 1,
        column: 1,
    }
    .parse()
}

fn needs_quotes(value: &str) -> bool {
    value.is_empty()
        || value.trim() != value
        || value.chars().any(|c| matches!(c, ',' | ';' | '"' | '\\' | '#' | '\n' | '\r'))
        || value.starts_with("---")
}

/// Renders a value so that [`parse_records`] reads it back unchanged.
pub fn quote_value(value: &str) -> String {
    if !needs_quotes(value) {
        return value.to_owned();
    }
    let mut out = String::with_capacity(value.len() + 2);
    out.push('"');
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(s) => f.write_str(&quote_value(s)),
            Value::List(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(&quote_value(item))?;
                }
                Ok(())
            }
        }
    }
}

/// One `key = value;` line per entry, records separated by `---` lines.
pub fn dump_records(records: &[Record]) -> String {
    let mut out = String::new();
    for (i, record) in records.iter().enumerate() {
        if i > 0 {
            out.push_str("---\n");
        }
        for (key, value) in record.iter() {
            out.push_str(&format!("{key} = {value};\n"));
        }
    }
    out
}
