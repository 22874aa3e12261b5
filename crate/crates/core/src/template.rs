//! Templates: token streams with holes and blocks resolved.
//!
//! A hole directive binds to the next non-comment token. When a directive is
//! removed (on erasure or expansion) at most one of the two whitespace runs
//! around it survives, so neighbouring tokens neither merge nor drift:
//!
//! * a block directive alone on its line takes the whole line with it;
//! * otherwise the run before the directive is kept (if non-empty, or if the
//!   directive opens the file) and the run after it is dropped: entirely for
//!   a hole, up to the next line break for a block directive;
//! * if the run before it is empty, the run after it is kept.

use thiserror::Error;

use crate::directive::{directive_interior, parse_directive, Directive, PatternPiece};
use crate::lexer::{tokenize, LexError, Location, Token, TokenKind, TokenStream, TokenizerMode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoleNode {
    pub pattern: Vec<PatternPiece>,
    /// The directive comment, kept for its location.
    pub directive: Token,
    /// Trivia emitted in front of the replacement.
    pub pre_trivia: String,
    /// Plain comments between the directive and the target, emitted verbatim.
    pub skipped: Vec<Token>,
    /// The replaced token; its `leading_trivia` is what survives removal.
    pub target: Token,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockNode {
    pub header: Directive,
    pub open: Token,
    pub close: Token,
    /// Emitted once before the block, whether or not the body is.
    pub open_trivia: String,
    pub body: Vec<Node>,
    /// Emitted at the end of every copy of the body.
    pub close_trivia: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Literal(Token),
    Hole(HoleNode),
    Block(BlockNode),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub nodes: Vec<Node>,
    pub trailing_trivia: String,
    pub mode: TokenizerMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("{location}: malformed directive: {message}")]
    MalformedDirective { location: Location, message: String },
    #[error("{location}: hole directive has no following token to replace")]
    DanglingHole { location: Location },
    #[error("{location}: unbalanced block: {message}")]
    UnbalancedBlock { location: Location, message: String },
}

impl TemplateError {
    pub fn location(&self) -> Location {
        match self {
            TemplateError::Lex(e) => e.location(),
            TemplateError::MalformedDirective { location, .. }
            | TemplateError::DanglingHole { location }
            | TemplateError::UnbalancedBlock { location, .. } => *location,
        }
    }
}

/// Tokenizes `source` and parses it into a [`Template`].
pub fn parse_template(source: &str, mode: TokenizerMode) -> Result<Template, TemplateError> {
    let stream = tokenize(source, mode)?;
    Template::from_stream(stream, mode)
}

/// What a removed directive takes from the trivia run that follows it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Drop {
    Nothing,
    All,
    /// Spaces and tabs up to the first line break.
    Blanks,
    ThroughNewline,
}

impl Drop {
    fn apply(self, trivia: &str) -> String {
        match self {
            Drop::Nothing => trivia.to_owned(),
            Drop::All => String::new(),
            Drop::Blanks => trivia.trim_start_matches([' ', '\t']).to_owned(),
            Drop::ThroughNewline => {
                let rest = trivia.trim_start_matches([' ', '\t', '\r']);
                rest.strip_prefix('\n').unwrap_or(rest).to_owned()
            }
        }
    }
}

struct Frame {
    header: Directive,
    open: Token,
    open_trivia: String,
    body: Vec<Node>,
}

impl Template {
    pub fn from_stream(stream: TokenStream, mode: TokenizerMode) -> Result<Template, TemplateError> {
        let TokenStream {
            tokens,
            trailing_trivia,
        } = stream;

        // Whole-line checks look at the source as written, before any trivia
        // has been taken by a neighbouring directive.
        let original_leads: Vec<String> = tokens.iter().map(|t| t.leading_trivia.clone()).collect();
        let line_start = |i: usize| i == 0 || original_leads[i].contains('\n');
        let line_end = |i: usize| i + 1 == original_leads.len() || original_leads[i + 1].contains('\n');

        let mut stack: Vec<Frame> = Vec::new();
        let mut top: Vec<Node> = Vec::new();
        let mut pending = Drop::Nothing;
        let mut iter = tokens.into_iter().enumerate();

        while let Some((i, mut tok)) = iter.next() {
            tok.leading_trivia = pending.apply(&tok.leading_trivia);
            pending = Drop::Nothing;
            let nodes = stack.last_mut().map_or(&mut top, |f| &mut f.body);

            if !tok.is_directive() {
                nodes.push(Node::Literal(tok));
                continue;
            }

            let directive = parse_directive(directive_interior(&tok.text)).map_err(|message| {
                TemplateError::MalformedDirective {
                    location: tok.location,
                    message,
                }
            })?;

            // Trivia of the directive that stays in the output, and what it
            // takes from the following run.
            let (kept, drop) = if directive.is_block_open() || directive == Directive::End {
                if line_start(i) && line_end(i) {
                    let kept = tok.leading_trivia.trim_end_matches([' ', '\t']).to_owned();
                    (kept, Drop::ThroughNewline)
                } else {
                    keep_one_run(i, &tok.leading_trivia, Drop::Blanks)
                }
            } else {
                keep_one_run(i, &tok.leading_trivia, Drop::All)
            };

            match directive {
                Directive::Hole(pattern) => {
                    let mut skipped = Vec::new();
                    let mut first = true;
                    let target = loop {
                        let Some((_, mut next)) = iter.next() else {
                            return Err(TemplateError::DanglingHole {
                                location: tok.location,
                            });
                        };
                        if first {
                            next.leading_trivia = drop.apply(&next.leading_trivia);
                            first = false;
                        }
                        match next.kind {
                            TokenKind::DirectiveComment => {
                                return Err(TemplateError::MalformedDirective {
                                    location: next.location,
                                    message: format!(
                                        "directive cannot be the target of the hole at {}",
                                        tok.location
                                    ),
                                })
                            }
                            TokenKind::PlainComment => skipped.push(next),
                            _ => break next,
                        }
                    };
                    nodes.push(Node::Hole(HoleNode {
                        pattern,
                        directive: tok,
                        pre_trivia: kept,
                        skipped,
                        target,
                    }));
                }
                Directive::End => {
                    let Some(frame) = stack.pop() else {
                        return Err(TemplateError::UnbalancedBlock {
                            location: tok.location,
                            message: "`end` without an open block".to_owned(),
                        });
                    };
                    let block = BlockNode {
                        header: frame.header,
                        open: frame.open,
                        close: tok,
                        open_trivia: frame.open_trivia,
                        body: frame.body,
                        close_trivia: kept,
                    };
                    stack.last_mut().map_or(&mut top, |f| &mut f.body).push(Node::Block(block));
                    pending = drop;
                }
                header => {
                    stack.push(Frame {
                        header,
                        open: tok,
                        open_trivia: kept,
                        body: Vec::new(),
                    });
                    pending = drop;
                }
            }
        }

        if let Some(frame) = stack.pop() {
            let keyword = match frame.header {
                Directive::Forall { .. } => "forall",
                _ => "if",
            };
            return Err(TemplateError::UnbalancedBlock {
                location: frame.open.location,
                message: format!("`{keyword}` block is never closed with `end`"),
            });
        }

        Ok(Template {
            nodes: top,
            trailing_trivia: pending.apply(&trailing_trivia),
            mode,
        })
    }

    /// Removes every directive, yielding the prototype the template was made from.
    pub fn erase(&self) -> String {
        let mut out = String::new();
        erase_nodes(&self.nodes, &mut out);
        out.push_str(&self.trailing_trivia);
        out
    }

    pub fn holes(&self) -> Vec<&HoleNode> {
        fn walk<'a>(nodes: &'a [Node], acc: &mut Vec<&'a HoleNode>) {
            for node in nodes {
                match node {
                    Node::Hole(h) => acc.push(h),
                    Node::Block(b) => walk(&b.body, acc),
                    Node::Literal(_) => {}
                }
            }
        }
        let mut acc = Vec::new();
        walk(&self.nodes, &mut acc);
        acc
    }

    pub fn blocks(&self) -> Vec<&BlockNode> {
        fn walk<'a>(nodes: &'a [Node], acc: &mut Vec<&'a BlockNode>) {
            for node in nodes {
                if let Node::Block(b) = node {
                    acc.push(b);
                    walk(&b.body, acc);
                }
            }
        }
        let mut acc = Vec::new();
        walk(&self.nodes, &mut acc);
        acc
    }
}

fn keep_one_run(index: usize, lead: &str, drop: Drop) -> (String, Drop) {
    if !lead.is_empty() || index == 0 {
        (lead.to_owned(), drop)
    } else {
        (String::new(), Drop::Nothing)
    }
}

fn erase_nodes(nodes: &[Node], out: &mut String) {
    for node in nodes {
        match node {
            Node::Literal(tok) => {
                out.push_str(&tok.leading_trivia);
                out.push_str(&tok.text);
            }
            Node::Hole(hole) => {
                out.push_str(&hole.pre_trivia);
                for tok in hole.skipped.iter().chain(Some(&hole.target)) {
                    out.push_str(&tok.leading_trivia);
                    out.push_str(&tok.text);
                }
            }
            Node::Block(block) => {
                out.push_str(&block.open_trivia);
                erase_nodes(&block.body, out);
                out.push_str(&block.close_trivia);
            }
        }
    }
}

/// Removes all directive comments from `source`.
pub fn erase(template: &Template) -> String {
    template.erase()
}
