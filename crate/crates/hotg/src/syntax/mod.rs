//! Lexer, parser, desugarer and pretty-printer for the `.hotg` article
//! language: terms with the usual set-theoretic notations, declarations,
//! and proof scripts. Converts names to de Bruijn and back.

pub mod ast;
pub mod desugar;
pub mod format;
pub mod lex;
pub mod parse;
pub mod print;

pub use ast::{ADecl, Article, BinOp, BinderKind, SAnn, SBinderGroup, SKind, SStep, STerm, SType};
pub use desugar::{desugar, desugar_type, Env, Local};
pub use format::{format_article, format_term, format_type};
pub use lex::{Pos, SyntaxError};
pub use parse::{parse_article, parse_term, Parser};
pub use print::{print_closed, print_term, print_type};
