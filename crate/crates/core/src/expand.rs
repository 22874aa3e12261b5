//! Expansion of a [`Template`] under binding records.

use std::collections::HashMap;

use thiserror::Error;

use crate::bindings::{Record, Value};
use crate::directive::{CompareOp, Directive, PatternPiece};
use crate::lexer::Location;
use crate::template::{BlockNode, Node, Template};

/// A key as seen through the environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolved<'a> {
    Scalar(&'a str),
    List(&'a [String]),
}

/// A record plus the loop variables bound by enclosing `forall` blocks.
/// Loop variables shadow record keys; inner loops shadow outer ones.
#[derive(Debug, Clone)]
pub struct Environment<'a> {
    base: &'a Record,
    loop_bindings: Vec<(&'a str, &'a str)>,
}

impl<'a> Environment<'a> {
    pub fn new(base: &'a Record) -> Self {
        Environment {
            base,
            loop_bindings: Vec::new(),
        }
    }

    pub fn bind(&mut self, var: &'a str, element: &'a str) {
        self.loop_bindings.push((var, element));
    }

    pub fn unbind(&mut self) {
        self.loop_bindings.pop();
    }

    pub fn lookup(&self, key: &str) -> Option<Resolved<'a>> {
        if let Some((_, element)) = self.loop_bindings.iter().rev().find(|(var, _)| *var == key) {
            return Some(Resolved::Scalar(element));
        }
        self.base.get(key).map(|value| match value {
            Value::Scalar(s) => Resolved::Scalar(s),
            Value::List(items) => Resolved::List(items),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedUnit {
    pub name: String,
    pub content: String,
}

fn at(location: &Option<Location>) -> String {
    location.map(|l| format!("{l}: ")).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("{}unknown key `{key}`", at(.location))]
    UnknownKey { key: String, location: Option<Location> },
    #[error("{}key `{key}` is a list but is used where a single value is expected", at(.location))]
    ListInScalarPosition { key: String, location: Option<Location> },
    #[error("{}`forall` over `{key}`, which is not a list", at(.location))]
    NotAList { key: String, location: Option<Location> },
    #[error("{}`if` compares `{key}`, which is a list", at(.location))]
    ComparisonOnList { key: String, location: Option<Location> },
    #[error("record {} has no non-empty single value for name key `{key}`", .record + 1)]
    MissingNameKey { record: usize, key: String },
    #[error("records {} and {} both produce a unit named `{name}`", .first + 1, .second + 1)]
    DuplicateUnitName { name: String, first: usize, second: usize },
    #[error("{source} (record {})", .record + 1)]
    InRecord {
        record: usize,
        #[source]
        source: Box<ExpandError>,
    },
}

impl ExpandError {
    pub fn location(&self) -> Option<Location> {
        match self {
            ExpandError::UnknownKey { location, .. }
            | ExpandError::ListInScalarPosition { location, .. }
            | ExpandError::NotAList { location, .. }
            | ExpandError::ComparisonOnList { location, .. } => *location,
            ExpandError::InRecord { source, .. } => source.location(),
            ExpandError::MissingNameKey { .. } | ExpandError::DuplicateUnitName { .. } => None,
        }
    }

    fn with_location(self, loc: Location) -> Self {
        match self {
            ExpandError::UnknownKey { key, .. } => ExpandError::UnknownKey {
                key,
                location: Some(loc),
            },
            ExpandError::ListInScalarPosition { key, .. } => ExpandError::ListInScalarPosition {
                key,
                location: Some(loc),
            },
            other => other,
        }
    }

    /// The innermost error, without the record wrapper.
    pub fn root(&self) -> &ExpandError {
        match self {
            ExpandError::InRecord { source, .. } => source.root(),
            other => other,
        }
    }
}

/// Concatenates the pattern with every variable replaced by its value.
pub fn substitute_pattern(pattern: &[PatternPiece], env: &Environment<'_>) -> Result<String, ExpandError> {
    let mut out = String::new();
    for piece in pattern {
        match piece {
            PatternPiece::Literal(text) => out.push_str(text),
            PatternPiece::Var(key) => match env.lookup(key) {
                Some(Resolved::Scalar(s)) => out.push_str(s),
                Some(Resolved::List(_)) => {
                    return Err(ExpandError::ListInScalarPosition {
                        key: key.clone(),
                        location: None,
                    })
                }
                None => {
                    return Err(ExpandError::UnknownKey {
                        key: key.clone(),
                        location: None,
                    })
                }
            },
        }
    }
    Ok(out)
}

/// Expands `template` under one record.
pub fn expand(template: &Template, record: &Record) -> Result<String, ExpandError> {
    let mut env = Environment::new(record);
    let mut out = String::new();
    expand_nodes(&template.nodes, &mut env, &mut out)?;
    out.push_str(&template.trailing_trivia);
    Ok(out)
}

fn expand_nodes<'a>(nodes: &'a [Node], env: &mut Environment<'a>, out: &mut String) -> Result<(), ExpandError> {
    for node in nodes {
        match node {
            Node::Literal(tok) => {
                out.push_str(&tok.leading_trivia);
                out.push_str(&tok.text);
            }
            Node::Hole(hole) => {
                let text = substitute_pattern(&hole.pattern, env)
                    .map_err(|e| e.with_location(hole.directive.location))?;
                out.push_str(&hole.pre_trivia);
                for tok in &hole.skipped {
                    out.push_str(&tok.leading_trivia);
                    out.push_str(&tok.text);
                }
                out.push_str(&hole.target.leading_trivia);
                out.push_str(&text);
            }
            Node::Block(block) => expand_block(block, env, out)?,
        }
    }
    Ok(())
}

fn expand_block<'a>(block: &'a BlockNode, env: &mut Environment<'a>, out: &mut String) -> Result<(), ExpandError> {
    let location = Some(block.open.location);
    out.push_str(&block.open_trivia);
    match &block.header {
        Directive::Forall {
            loop_var,
            list_key,
            sep,
        } => {
            let items = match env.lookup(list_key) {
                Some(Resolved::List(items)) => items,
                Some(Resolved::Scalar(_)) => {
                    return Err(ExpandError::NotAList {
                        key: list_key.clone(),
                        location,
                    })
                }
                None => {
                    return Err(ExpandError::UnknownKey {
                        key: list_key.clone(),
                        location,
                    })
                }
            };
            for (i, item) in items.iter().enumerate() {
                env.bind(loop_var, item);
                let result = expand_nodes(&block.body, env, out);
                env.unbind();
                result?;
                if i + 1 < items.len() {
                    if let Some(sep) = sep {
                        out.push_str(sep);
                    }
                }
                out.push_str(&block.close_trivia);
            }
        }
        Directive::If { key, comparison } => {
            let holds = match (comparison, env.lookup(key)) {
                (None, None) => false,
                (None, Some(Resolved::Scalar(s))) => !s.is_empty(),
                (None, Some(Resolved::List(items))) => !items.is_empty(),
                (Some(cmp), Some(Resolved::Scalar(s))) => match cmp.op {
                    CompareOp::Eq => s == cmp.literal,
                    CompareOp::Ne => s != cmp.literal,
                },
                (Some(_), Some(Resolved::List(_))) => {
                    return Err(ExpandError::ComparisonOnList {
                        key: key.clone(),
                        location,
                    })
                }
                (Some(_), None) => {
                    return Err(ExpandError::UnknownKey {
                        key: key.clone(),
                        location,
                    })
                }
            };
            if holds {
                expand_nodes(&block.body, env, out)?;
                out.push_str(&block.close_trivia);
            }
        }
        Directive::Hole(_) | Directive::End => unreachable!("block headers are forall or if"),
    }
    Ok(())
}

fn unit_name<'r>(record: &'r Record, index: usize, name_key: &str) -> Result<&'r str, ExpandError> {
    match record.get(name_key) {
        Some(Value::Scalar(name)) if !name.is_empty() => Ok(name),
        _ => Err(ExpandError::MissingNameKey {
            record: index,
            key: name_key.to_owned(),
        }),
    }
}

fn unit_names<'r>(records: &'r [Record], name_key: &str) -> Result<Vec<&'r str>, ExpandError> {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    let mut names = Vec::with_capacity(records.len());
    for (index, record) in records.iter().enumerate() {
        let name = unit_name(record, index, name_key)?;
        if let Some(&first) = seen.get(name) {
            return Err(ExpandError::DuplicateUnitName {
                name: name.to_owned(),
                first,
                second: index,
            });
        }
        seen.insert(name, index);
        names.push(name);
    }
    Ok(names)
}

/// Expands the template once per record; each unit is named by the record's
/// `name_key` value. Names are validated before anything is expanded.
pub fn expand_all(template: &Template, records: &[Record], name_key: &str) -> Result<Vec<GeneratedUnit>, ExpandError> {
    let names = unit_names(records, name_key)?;
    records
        .iter()
        .zip(names)
        .enumerate()
        .map(|(index, (record, name))| {
            let content = expand(template, record).map_err(|e| ExpandError::InRecord {
                record: index,
                source: Box::new(e),
            })?;
            Ok(GeneratedUnit {
                name: name.to_owned(),
                content,
            })
        })
        .collect()
}

/// Dry-run: expands every record and discards the output, then validates
/// unit names. Key errors are reported before naming errors.
pub fn check_records(template: &Template, records: &[Record], name_key: &str) -> Result<(), ExpandError> {
    for (index, record) in records.iter().enumerate() {
        expand(template, record).map_err(|e| ExpandError::InRecord {
            record: index,
            source: Box::new(e),
        })?;
    }
    unit_names(records, name_key).map(|_| ())
}
