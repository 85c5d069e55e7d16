//! Recursive-descent parser for terms, types, proof scripts and articles.
//!
//! Operator precedence, loosest to tightest:
//! binders, `->`, `<->`, `\/`, `/\`, `~`, comparisons (`:e` `/:e` `c=` `=` `<>`),
//! application. Binders extend maximally to the right.

use std::collections::HashSet;

use super::ast::*;
use super::lex::{err, lex, Pos, SyntaxError, Tok};
use crate::term::Opacity;

const RESERVED: &[&str] = &[
    "fun", "forall", "exists", "some", "such", "that", "with", "let", "assume", "claim", "set",
    "prop", "exact", "apply", "witness", "cases", "prove", "Import", "Definition", "Opaque",
    "Theorem", "Trusted", "Proof", "Qed",
];

fn is_reserved(s: &str) -> bool {
    RESERVED.contains(&s)
}

pub struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
}

impl Parser {
    pub fn new(src: &str) -> Result<Parser, SyntaxError> {
        Ok(Parser { toks: lex(src)?, i: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<Pos, SyntaxError> {
        if self.peek() == t {
            Ok(self.next().1)
        } else {
            err(self.pos(), format!("expected `{t}`, found `{}`", self.peek()))
        }
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<Pos, SyntaxError> {
        if self.at_kw(kw) {
            Ok(self.next().1)
        } else {
            err(self.pos(), format!("expected `{kw}`, found `{}`", self.peek()))
        }
    }

    fn expect_name(&mut self) -> Result<(String, Pos), SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_reserved(&s) => {
                let p = self.next().1;
                Ok((s, p))
            }
            Tok::Ident(s) => err(self.pos(), format!("`{s}` is a reserved word")),
            other => err(self.pos(), format!("expected an identifier, found `{other}`")),
        }
    }

    // ---- types ----

    pub fn parse_type(&mut self) -> Result<SType, SyntaxError> {
        let lhs = self.parse_type_atom()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.parse_type()?;
            Ok(SType::Arrow(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn parse_type_atom(&mut self) -> Result<SType, SyntaxError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.next();
                let t = self.parse_type()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) => {
                let p = self.next().1;
                match s.as_str() {
                    "set" => Ok(SType::Set),
                    "prop" => Ok(SType::Prop),
                    _ if is_reserved(&s) => err(p, format!("`{s}` is a reserved word")),
                    _ => Ok(SType::Name(s, p)),
                }
            }
            other => err(self.pos(), format!("expected a type, found `{other}`")),
        }
    }

    // ---- terms ----

    pub fn parse_term(&mut self) -> Result<STerm, SyntaxError> {
        if self.at_binder() {
            return self.parse_binder();
        }
        self.parse_imp()
    }

    fn at_binder(&self) -> bool {
        self.at_kw("fun") || self.at_kw("forall") || self.at_kw("exists") || self.at_kw("some")
    }

    fn parse_binder(&mut self) -> Result<STerm, SyntaxError> {
        let (tok, pos) = self.next();
        let Tok::Ident(kw) = tok else { unreachable!() };
        let kind = match kw.as_str() {
            "fun" => BinderKind::Fun,
            "forall" => BinderKind::Forall,
            "exists" => BinderKind::Exists,
            "some" => BinderKind::Choice,
            _ => unreachable!(),
        };
        let mut names = vec![self.expect_name()?];
        while matches!(self.peek(), Tok::Ident(s) if !is_reserved(s)) {
            names.push(self.expect_name()?);
        }
        let ann = if self.eat(&Tok::Colon) {
            SAnn::Ty(self.parse_type()?)
        } else if self.eat(&Tok::InTok) {
            SAnn::InSet(Box::new(self.parse_app()?))
        } else {
            SAnn::Default
        };
        match kind {
            BinderKind::Fun => self.expect(&Tok::DArrow)?,
            _ => self.expect(&Tok::Comma)?,
        };
        let body = self.parse_term()?;
        Ok(STerm::new(pos, SKind::Binder(kind, SBinderGroup { names, ann }, Box::new(body))))
    }

    /// The right-hand side of a binary operator: a binder extends maximally
    /// right from here, otherwise continue at the given level.
    fn parse_rhs(
        &mut self,
        level: fn(&mut Self) -> Result<STerm, SyntaxError>,
    ) -> Result<STerm, SyntaxError> {
        if self.at_binder() {
            self.parse_binder()
        } else {
            level(self)
        }
    }

    fn parse_imp(&mut self) -> Result<STerm, SyntaxError> {
        let lhs = self.parse_iff()?;
        if self.peek() == &Tok::Arrow {
            let p = self.next().1;
            let rhs = self.parse_rhs(Self::parse_imp)?;
            Ok(STerm::new(p, SKind::Bin(BinOp::Imp, Box::new(lhs), Box::new(rhs))))
        } else {
            Ok(lhs)
        }
    }

    fn parse_iff(&mut self) -> Result<STerm, SyntaxError> {
        let lhs = self.parse_or()?;
        if self.peek() == &Tok::IffTok {
            let p = self.next().1;
            let rhs = self.parse_rhs(Self::parse_iff)?;
            Ok(STerm::new(p, SKind::Bin(BinOp::Iff, Box::new(lhs), Box::new(rhs))))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> Result<STerm, SyntaxError> {
        let lhs = self.parse_and()?;
        if self.peek() == &Tok::Vee {
            let p = self.next().1;
            let rhs = self.parse_rhs(Self::parse_or)?;
            Ok(STerm::new(p, SKind::Bin(BinOp::Or, Box::new(lhs), Box::new(rhs))))
        } else {
            Ok(lhs)
        }
    }

    fn parse_and(&mut self) -> Result<STerm, SyntaxError> {
        let lhs = self.parse_neg()?;
        if self.peek() == &Tok::Wedge {
            let p = self.next().1;
            let rhs = self.parse_rhs(Self::parse_and)?;
            Ok(STerm::new(p, SKind::Bin(BinOp::And, Box::new(lhs), Box::new(rhs))))
        } else {
            Ok(lhs)
        }
    }

    fn parse_neg(&mut self) -> Result<STerm, SyntaxError> {
        if self.peek() == &Tok::Tilde {
            let p = self.next().1;
            let inner = if self.at_binder() { self.parse_binder()? } else { self.parse_neg()? };
            Ok(STerm::new(p, SKind::Not(Box::new(inner))))
        } else {
            self.parse_cmp()
        }
    }

    fn parse_cmp(&mut self) -> Result<STerm, SyntaxError> {
        let lhs = self.parse_app()?;
        let op = match self.peek() {
            Tok::InTok => BinOp::In,
            Tok::NotinTok => BinOp::Notin,
            Tok::SubqTok => BinOp::Subq,
            Tok::EqTok => BinOp::Eq,
            Tok::NeTok => BinOp::Ne,
            _ => return Ok(lhs),
        };
        let p = self.next().1;
        let rhs = self.parse_app()?;
        Ok(STerm::new(p, SKind::Bin(op, Box::new(lhs), Box::new(rhs))))
    }

    fn at_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::LBrace => true,
            Tok::Ident(s) => !is_reserved(s),
            _ => false,
        }
    }

    pub(crate) fn parse_app(&mut self) -> Result<STerm, SyntaxError> {
        let mut t = self.parse_atom()?;
        while self.at_atom() {
            let arg = self.parse_atom()?;
            let pos = t.pos;
            t = STerm::new(pos, SKind::App(Box::new(t), Box::new(arg)));
        }
        Ok(t)
    }

    fn parse_atom(&mut self) -> Result<STerm, SyntaxError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.next();
                let t = self.parse_term()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Tok::LBrace => self.parse_braces(),
            Tok::Ident(s) if !is_reserved(&s) => {
                let p = self.next().1;
                let ty_args = if self.peek() == &Tok::AtBracket {
                    self.next();
                    let mut tys = vec![self.parse_type()?];
                    while self.eat(&Tok::Comma) {
                        tys.push(self.parse_type()?);
                    }
                    self.expect(&Tok::RBracket)?;
                    Some(tys)
                } else {
                    None
                };
                Ok(STerm::new(p, SKind::Name(s, ty_args)))
            }
            other => err(self.pos(), format!("expected a term, found `{other}`")),
        }
    }

    /// `{a}`, `{a, b}`, `{e | x :e X}`, `{x :e X | phi}`,
    /// `{e | x :e X such that phi}`.
    fn parse_braces(&mut self) -> Result<STerm, SyntaxError> {
        let open = self.expect(&Tok::LBrace)?;
        let first = self.parse_term()?;
        match self.peek().clone() {
            Tok::RBrace => {
                self.next();
                Ok(STerm::new(open, SKind::Sing(Box::new(first))))
            }
            Tok::Comma => {
                self.next();
                let second = self.parse_term()?;
                self.expect(&Tok::RBrace)?;
                Ok(STerm::new(open, SKind::UPair(Box::new(first), Box::new(second))))
            }
            Tok::Bar => {
                self.next();
                // `{x :e X | phi}` if the first component is literally a
                // membership with a variable on the left.
                if let SKind::Bin(BinOp::In, lhs, domain) = &first.kind {
                    if let SKind::Name(v, None) = &lhs.kind {
                        let pred = self.parse_term()?;
                        self.expect(&Tok::RBrace)?;
                        return Ok(STerm::new(
                            open,
                            SKind::Sep {
                                var: (v.clone(), lhs.pos),
                                domain: domain.clone(),
                                pred: Box::new(pred),
                            },
                        ));
                    }
                }
                let var = self.expect_name()?;
                self.expect(&Tok::InTok)?;
                let domain = self.parse_app()?;
                if self.eat_kw("such") {
                    self.expect_kw("that")?;
                    let pred = self.parse_term()?;
                    self.expect(&Tok::RBrace)?;
                    Ok(STerm::new(
                        open,
                        SKind::ReplSep {
                            elem: Box::new(first),
                            var,
                            domain: Box::new(domain),
                            pred: Box::new(pred),
                        },
                    ))
                } else {
                    self.expect(&Tok::RBrace)?;
                    Ok(STerm::new(
                        open,
                        SKind::Repl { elem: Box::new(first), var, domain: Box::new(domain) },
                    ))
                }
            }
            other => err(self.pos(), format!("expected `}}`, `,` or `|`, found `{other}`")),
        }
    }

    // ---- scripts ----

    pub fn parse_steps(&mut self) -> Result<Vec<SStep>, SyntaxError> {
        let mut steps = Vec::new();
        loop {
            if self.at_kw("Qed") || self.peek() == &Tok::RBrace || self.peek() == &Tok::Eof {
                return Ok(steps);
            }
            steps.push(self.parse_step()?);
        }
    }

    fn parse_step(&mut self) -> Result<SStep, SyntaxError> {
        let pos = self.pos();
        if self.eat_kw("let") {
            let mut names = vec![self.expect_name()?];
            while matches!(self.peek(), Tok::Ident(s) if !is_reserved(s)) {
                names.push(self.expect_name()?);
            }
            let ty = if self.eat(&Tok::Colon) { Some(self.parse_type()?) } else { None };
            self.expect(&Tok::Dot)?;
            Ok(SStep::Let(names, ty, pos))
        } else if self.eat_kw("assume") {
            let (name, _) = self.expect_name()?;
            self.expect(&Tok::Colon)?;
            let prop = self.parse_term()?;
            self.expect(&Tok::Dot)?;
            Ok(SStep::Assume(name, prop, pos))
        } else if self.eat_kw("claim") {
            let (name, _) = self.expect_name()?;
            self.expect(&Tok::Colon)?;
            let prop = self.parse_term()?;
            self.expect(&Tok::Dot)?;
            self.expect(&Tok::LBrace)?;
            let sub = self.parse_steps()?;
            self.expect(&Tok::RBrace)?;
            Ok(SStep::Claim(name, prop, sub, pos))
        } else if self.eat_kw("set") {
            let (name, _) = self.expect_name()?;
            self.expect(&Tok::Colon)?;
            let ty = self.parse_type()?;
            self.expect(&Tok::ColonEq)?;
            let body = self.parse_term()?;
            self.expect(&Tok::Dot)?;
            Ok(SStep::SetLocal(name, ty, body, pos))
        } else if self.eat_kw("exact") {
            let pe = self.parse_term()?;
            self.expect(&Tok::Dot)?;
            Ok(SStep::Exact(pe, pos))
        } else if self.eat_kw("apply") {
            let pe = self.parse_term()?;
            self.expect(&Tok::Dot)?;
            Ok(SStep::Apply(pe, pos))
        } else if self.eat_kw("witness") {
            let t = self.parse_term()?;
            self.expect(&Tok::Dot)?;
            Ok(SStep::Witness(t, pos))
        } else if self.eat_kw("cases") {
            let pe = self.parse_term()?;
            self.expect_kw("with")?;
            let (h1, _) = self.expect_name()?;
            let (h2, _) = self.expect_name()?;
            self.expect(&Tok::LBrace)?;
            let left = self.parse_steps()?;
            self.expect(&Tok::RBrace)?;
            self.expect(&Tok::LBrace)?;
            let right = self.parse_steps()?;
            self.expect(&Tok::RBrace)?;
            Ok(SStep::Cases(pe, h1, h2, left, right, pos))
        } else if self.eat_kw("prove") {
            let t = self.parse_term()?;
            self.expect(&Tok::Dot)?;
            Ok(SStep::Prove(t, pos))
        } else {
            err(pos, format!("expected a proof step, found `{}`", self.peek()))
        }
    }

    // ---- articles ----

    fn parse_ty_vars(&mut self) -> Result<Vec<String>, SyntaxError> {
        let mut vars = Vec::new();
        if self.eat(&Tok::LBracket) {
            loop {
                let (n, p) = self.expect_name()?;
                if vars.contains(&n) {
                    return err(p, format!("duplicate type variable {n}"));
                }
                vars.push(n);
                if self.eat(&Tok::RBracket) {
                    break;
                }
            }
            if vars.len() > crate::term::MAX_TYPE_VARS as usize {
                return err(self.pos(), "at most three type variables are allowed");
            }
        }
        Ok(vars)
    }

    pub fn parse_article(&mut self) -> Result<Article, SyntaxError> {
        let mut decls = Vec::new();
        let mut seen: HashSet<String> = HashSet::new();
        loop {
            let pos = self.pos();
            if self.peek() == &Tok::Eof {
                return Ok(Article { decls });
            }
            if self.eat_kw("Import") {
                let (name, _) = self.expect_name()?;
                self.expect(&Tok::Dot)?;
                decls.push(ADecl::Import(name, pos));
                continue;
            }
            let opacity = if self.at_kw("Opaque") { Some(Opacity::Opaque) } else { None };
            if self.eat_kw("Definition") || self.eat_kw("Opaque") {
                let (name, npos) = self.expect_name()?;
                if !seen.insert(name.clone()) {
                    return err(npos, format!("duplicate declaration {name}"));
                }
                let ty_vars = self.parse_ty_vars()?;
                self.expect(&Tok::Colon)?;
                let ty = self.parse_type()?;
                self.expect(&Tok::ColonEq)?;
                let body = self.parse_term()?;
                self.expect(&Tok::Dot)?;
                decls.push(ADecl::Definition {
                    name,
                    ty_vars,
                    ty,
                    body,
                    opacity: opacity.unwrap_or(Opacity::Transparent),
                    pos,
                });
            } else if self.eat_kw("Theorem") {
                let (name, npos) = self.expect_name()?;
                if !seen.insert(name.clone()) {
                    return err(npos, format!("duplicate declaration {name}"));
                }
                let ty_vars = self.parse_ty_vars()?;
                self.expect(&Tok::Colon)?;
                let statement = self.parse_term()?;
                self.expect(&Tok::Dot)?;
                self.expect_kw("Proof")?;
                self.expect(&Tok::Dot)?;
                let script = self.parse_steps()?;
                self.expect_kw("Qed")?;
                self.expect(&Tok::Dot)?;
                decls.push(ADecl::Theorem { name, ty_vars, statement, script, pos });
            } else if self.eat_kw("Trusted") {
                let (name, npos) = self.expect_name()?;
                if !seen.insert(name.clone()) {
                    return err(npos, format!("duplicate declaration {name}"));
                }
                let ty_vars = self.parse_ty_vars()?;
                self.expect(&Tok::Colon)?;
                let statement = self.parse_term()?;
                self.expect(&Tok::Dot)?;
                decls.push(ADecl::Trusted { name, ty_vars, statement, pos });
            } else {
                return err(
                    pos,
                    format!(
                        "expected `Import`, `Definition`, `Opaque`, `Theorem` or `Trusted`, found `{}`",
                        self.peek()
                    ),
                );
            }
        }
    }
}

/// Parses a whole article source file.
pub fn parse_article(src: &str) -> Result<Article, SyntaxError> {
    Parser::new(src)?.parse_article()
}

/// Parses a single term; the entire input must be consumed.
pub fn parse_term(src: &str) -> Result<STerm, SyntaxError> {
    let mut p = Parser::new(src)?;
    let t = p.parse_term()?;
    p.expect(&Tok::Eof)?;
    Ok(t)
}
