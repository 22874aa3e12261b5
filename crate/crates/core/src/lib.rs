//! Code generation from templates that are themselves compilable source.
//!
//! A template is an ordinary source file in which the tokens that vary are
//! preceded by `/*C ... */` directive comments:
//!
//! ```text
//! class /*C %name% */ A {
//!     public String toString() {
//!         Printer.write( /*C " %name% " */ "A" );
//!     }
//! }
//! ```
//!
//! Because the directives live in comments, the template still compiles and
//! can be refactored by ordinary tools. [`template::parse_template`] turns the
//! source into a [`Template`], [`bindings::parse_records`] reads the data file,
//! and [`expand::expand_all`] produces one [`GeneratedUnit`] per record.

pub mod bindings;
pub mod cli;
pub mod directive;
pub mod expand;
pub mod lexer;
pub mod template;

pub use bindings::{dump_records, parse_records, parse_records_located, DataError, Record, Value};
pub use directive::{parse_directive, CompareOp, Comparison, Directive, PatternPiece};
pub use expand::{check_records, expand, expand_all, substitute_pattern, Environment, ExpandError, GeneratedUnit};
pub use lexer::{render, tokenize, LexError, Location, Token, TokenKind, TokenStream, TokenizerMode};
pub use template::{erase, parse_template, Node, Template, TemplateError};
