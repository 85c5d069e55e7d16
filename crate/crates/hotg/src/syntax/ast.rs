//! Surface syntax trees: named-variable terms with notation nodes, article
//! declarations and proof-script steps. Everything carries source positions.

use super::lex::Pos;
use crate::term::Opacity;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SType {
    Prop,
    Set,
    /// A declared type-variable name.
    Name(String, Pos),
    Arrow(Box<SType>, Box<SType>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SBinderGroup {
    pub names: Vec<(String, Pos)>,
    pub ann: SAnn,
}

/// Binder annotation: an explicit type, a set bound (`x :e s`), or nothing
/// (defaults to `set`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SAnn {
    Default,
    Ty(SType),
    InSet(Box<STerm>),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BinderKind {
    Fun,
    Forall,
    Exists,
    Choice, // `some x, ...`
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BinOp {
    Imp,
    Iff,
    Or,
    And,
    Eq,
    Ne,
    In,
    Notin,
    Subq,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct STerm {
    pub pos: Pos,
    pub kind: SKind,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SKind {
    /// Identifier with optional explicit type arguments (`name@[set, prop]`).
    Name(String, Option<Vec<SType>>),
    App(Box<STerm>, Box<STerm>),
    Bin(BinOp, Box<STerm>, Box<STerm>),
    Not(Box<STerm>),
    Binder(BinderKind, SBinderGroup, Box<STerm>),
    /// `{e | x :e X}`
    Repl { elem: Box<STerm>, var: (String, Pos), domain: Box<STerm> },
    /// `{x :e X | phi}`
    Sep { var: (String, Pos), domain: Box<STerm>, pred: Box<STerm> },
    /// `{e | x :e X such that phi}`
    ReplSep {
        elem: Box<STerm>,
        var: (String, Pos),
        domain: Box<STerm>,
        pred: Box<STerm>,
    },
    /// `{a, b}`
    UPair(Box<STerm>, Box<STerm>),
    /// `{a}`
    Sing(Box<STerm>),
}

impl STerm {
    pub fn new(pos: Pos, kind: SKind) -> STerm {
        STerm { pos, kind }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SStep {
    /// `let x y.` or `let x:T.` — universal introduction(s).
    Let(Vec<(String, Pos)>, Option<SType>, Pos),
    /// `assume H: phi.`
    Assume(String, STerm, Pos),
    /// `claim L: phi. { sub }`
    Claim(String, STerm, Vec<SStep>, Pos),
    /// `set n : T := body.` — script-local transparent abbreviation.
    SetLocal(String, SType, STerm, Pos),
    /// `exact pexpr.`
    Exact(STerm, Pos),
    /// `apply pexpr.` — remaining antecedents become goals, in order.
    Apply(STerm, Pos),
    /// `witness t.` — existential introduction.
    Witness(STerm, Pos),
    /// `cases pexpr with H1 H2 { left } { right }`
    Cases(STerm, String, String, Vec<SStep>, Vec<SStep>, Pos),
    /// `prove phi.` — restate the goal, checked by conversion.
    Prove(STerm, Pos),
}

impl SStep {
    pub fn pos(&self) -> Pos {
        match self {
            SStep::Let(_, _, p)
            | SStep::Assume(_, _, p)
            | SStep::Claim(_, _, _, p)
            | SStep::SetLocal(_, _, _, p)
            | SStep::Exact(_, p)
            | SStep::Apply(_, p)
            | SStep::Witness(_, p)
            | SStep::Cases(_, _, _, _, _, p)
            | SStep::Prove(_, p) => *p,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ADecl {
    Import(String, Pos),
    Definition {
        name: String,
        ty_vars: Vec<String>,
        ty: SType,
        body: STerm,
        opacity: Opacity,
        pos: Pos,
    },
    Theorem {
        name: String,
        ty_vars: Vec<String>,
        statement: STerm,
        script: Vec<SStep>,
        pos: Pos,
    },
    Trusted {
        name: String,
        ty_vars: Vec<String>,
        statement: STerm,
        pos: Pos,
    },
}

impl ADecl {
    pub fn name(&self) -> Option<&str> {
        match self {
            ADecl::Import(..) => None,
            ADecl::Definition { name, .. }
            | ADecl::Theorem { name, .. }
            | ADecl::Trusted { name, .. } => Some(name),
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            ADecl::Import(_, p) => *p,
            ADecl::Definition { pos, .. }
            | ADecl::Theorem { pos, .. }
            | ADecl::Trusted { pos, .. } => *pos,
        }
    }
}

/// A parsed article: an ordered list of declarations. Imports are recorded
/// unresolved; resolution is the driver's job.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Article {
    pub decls: Vec<ADecl>,
}

impl Article {
    pub fn imports(&self) -> impl Iterator<Item = &str> {
        self.decls.iter().filter_map(|d| match d {
            ADecl::Import(n, _) => Some(n.as_str()),
            _ => None,
        })
    }
}
