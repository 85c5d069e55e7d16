//! A brute-force hereditarily-finite-set model, used by the test suite as an
//! independent oracle for closed first-order instances. Nothing in the
//! kernel or the formal library depends on this module.

use std::fmt;

use crate::term::{ConstName, Term, Type};

/// A hereditarily finite set. The element vector is sorted and
/// deduplicated, so structural equality is extensional equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HFSet(Vec<HFSet>);

impl HFSet {
    pub fn empty() -> HFSet {
        HFSet(Vec::new())
    }

    pub fn from_vec(mut elems: Vec<HFSet>) -> HFSet {
        elems.sort();
        elems.dedup();
        HFSet(elems)
    }

    pub fn elems(&self) -> &[HFSet] {
        &self.0
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        self.0.binary_search(x).is_ok()
    }

    pub fn subset_of(&self, other: &HFSet) -> bool {
        self.0.iter().all(|e| other.contains(e))
    }

    pub fn sing(x: HFSet) -> HFSet {
        HFSet(vec![x])
    }

    pub fn upair(a: HFSet, b: HFSet) -> HFSet {
        HFSet::from_vec(vec![a, b])
    }

    pub fn union(&self) -> HFSet {
        let mut out = Vec::new();
        for e in &self.0 {
            out.extend(e.0.iter().cloned());
        }
        HFSet::from_vec(out)
    }

    pub fn power(&self) -> HFSet {
        let mut subsets = vec![Vec::new()];
        for e in &self.0 {
            let mut next = Vec::with_capacity(subsets.len() * 2);
            for s in &subsets {
                next.push(s.clone());
                let mut t = s.clone();
                t.push(e.clone());
                next.push(t);
            }
            subsets = next;
        }
        HFSet::from_vec(subsets.into_iter().map(HFSet::from_vec).collect())
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

pub const MAX_RANK: u32 = 5;

/// The elements of `V_rank`. `V_0` is empty, `V_4` has 16 elements, `V_5`
/// has 65536 and is the budget limit.
pub fn universe(rank: u32) -> Result<Vec<HFSet>, HfError> {
    if rank > MAX_RANK {
        return Err(HfError::BudgetExceeded(rank));
    }
    let mut v: Vec<HFSet> = Vec::new();
    for _ in 0..rank {
        let stage = HFSet::from_vec(v.clone());
        v = stage.power().elems().to_vec();
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HfError {
    BudgetExceeded(u32),
    NotFirstOrder(String),
}

impl fmt::Display for HfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HfError::BudgetExceeded(r) => {
                write!(f, "rank {r} exceeds the oracle budget (max {MAX_RANK})")
            }
            HfError::NotFirstOrder(m) => write!(f, "not a first-order sentence: {m}"),
        }
    }
}

impl std::error::Error for HfError {}

/// First-order set terms with de Bruijn variables bound by the enclosing
/// quantifiers of the sentence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FOTerm {
    Var(u32),
    Empty,
    Union(Box<FOTerm>),
    Power(Box<FOTerm>),
    UPair(Box<FOTerm>, Box<FOTerm>),
    Sing(Box<FOTerm>),
    /// `{x :e t | phi}`; the predicate is under one binder.
    Sep(Box<FOTerm>, Box<FOSentence>),
    /// `{e | x :e t}`; the element is under one binder.
    Repl(Box<FOTerm>, Box<FOTerm>),
    /// `{e | x :e t such that phi}`.
    ReplSep(Box<FOTerm>, Box<FOSentence>, Box<FOTerm>),
}

/// First-order formulas over membership and equality. Quantifiers are
/// either bounded by a term or range over the whole rank universe.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FOSentence {
    Falsum,
    In(FOTerm, FOTerm),
    Eq(FOTerm, FOTerm),
    Subq(FOTerm, FOTerm),
    Not(Box<FOSentence>),
    And(Box<FOSentence>, Box<FOSentence>),
    Or(Box<FOSentence>, Box<FOSentence>),
    Imp(Box<FOSentence>, Box<FOSentence>),
    Iff(Box<FOSentence>, Box<FOSentence>),
    ForallIn(FOTerm, Box<FOSentence>),
    ExistsIn(FOTerm, Box<FOSentence>),
    ForallRank(Box<FOSentence>),
    ExistsRank(Box<FOSentence>),
}

/// Evaluates a closed sentence by exhaustive enumeration over `V_rank`.
pub fn hf_eval(s: &FOSentence, rank: u32) -> Result<bool, HfError> {
    let univ = universe(rank)?;
    let mut env = Vec::new();
    Ok(eval_sentence(s, &univ, &mut env))
}

fn eval_term(t: &FOTerm, univ: &[HFSet], env: &mut Vec<HFSet>) -> HFSet {
    match t {
        FOTerm::Var(k) => env[env.len() - 1 - *k as usize].clone(),
        FOTerm::Empty => HFSet::empty(),
        FOTerm::Union(a) => eval_term(a, univ, env).union(),
        FOTerm::Power(a) => eval_term(a, univ, env).power(),
        FOTerm::UPair(a, b) => {
            HFSet::upair(eval_term(a, univ, env), eval_term(b, univ, env))
        }
        FOTerm::Sing(a) => HFSet::sing(eval_term(a, univ, env)),
        FOTerm::Sep(dom, pred) => {
            let d = eval_term(dom, univ, env);
            let mut out = Vec::new();
            for e in d.elems() {
                env.push(e.clone());
                let keep = eval_sentence(pred, univ, env);
                env.pop();
                if keep {
                    out.push(e.clone());
                }
            }
            HFSet::from_vec(out)
        }
        FOTerm::Repl(dom, elem) => {
            let d = eval_term(dom, univ, env);
            let mut out = Vec::new();
            for e in d.elems() {
                env.push(e.clone());
                out.push(eval_term(elem, univ, env));
                env.pop();
            }
            HFSet::from_vec(out)
        }
        FOTerm::ReplSep(dom, pred, elem) => {
            let d = eval_term(dom, univ, env);
            let mut out = Vec::new();
            for e in d.elems() {
                env.push(e.clone());
                if eval_sentence(pred, univ, env) {
                    out.push(eval_term(elem, univ, env));
                }
                env.pop();
            }
            HFSet::from_vec(out)
        }
    }
}

fn eval_sentence(s: &FOSentence, univ: &[HFSet], env: &mut Vec<HFSet>) -> bool {
    match s {
        FOSentence::Falsum => false,
        FOSentence::In(a, b) => {
            let x = eval_term(a, univ, env);
            eval_term(b, univ, env).contains(&x)
        }
        FOSentence::Eq(a, b) => eval_term(a, univ, env) == eval_term(b, univ, env),
        FOSentence::Subq(a, b) => {
            eval_term(a, univ, env).subset_of(&eval_term(b, univ, env))
        }
        FOSentence::Not(a) => !eval_sentence(a, univ, env),
        FOSentence::And(a, b) => eval_sentence(a, univ, env) && eval_sentence(b, univ, env),
        FOSentence::Or(a, b) => eval_sentence(a, univ, env) || eval_sentence(b, univ, env),
        FOSentence::Imp(a, b) => !eval_sentence(a, univ, env) || eval_sentence(b, univ, env),
        FOSentence::Iff(a, b) => eval_sentence(a, univ, env) == eval_sentence(b, univ, env),
        FOSentence::ForallIn(dom, body) => {
            let d = eval_term(dom, univ, env);
            d.elems().iter().all(|e| {
                env.push(e.clone());
                let r = eval_sentence(body, univ, env);
                env.pop();
                r
            })
        }
        FOSentence::ExistsIn(dom, body) => {
            let d = eval_term(dom, univ, env);
            d.elems().iter().any(|e| {
                env.push(e.clone());
                let r = eval_sentence(body, univ, env);
                env.pop();
                r
            })
        }
        FOSentence::ForallRank(body) => univ.iter().all(|e| {
            env.push(e.clone());
            let r = eval_sentence(body, univ, env);
            env.pop();
            r
        }),
        FOSentence::ExistsRank(body) => univ.iter().any(|e| {
            env.push(e.clone());
            let r = eval_sentence(body, univ, env);
            env.pop();
            r
        }),
    }
}

fn nfo<T>(msg: impl Into<String>) -> Result<T, HfError> {
    Err(HfError::NotFirstOrder(msg.into()))
}

fn unlift(t: &Term) -> Result<Term, HfError> {
    if t.free_in(0) {
        return nfo("quantifier bound mentions the bound variable");
    }
    crate::term::lift(t, 0, -1).map_err(|_| HfError::NotFirstOrder("unlift failed".into()))
}

fn spine(t: &Term) -> (&Term, Vec<&Term>) {
    let mut args = Vec::new();
    let mut head = t;
    while let Term::App(f, a) = head {
        args.push(&**a);
        head = f;
    }
    args.reverse();
    (head, args)
}

/// Recognizes a desugared kernel term as a first-order set term. Matching
/// is by the prelude names; the stdlib tests pin those definitions.
pub fn fo_term_of(t: &Term) -> Result<FOTerm, HfError> {
    let (head, args) = spine(t);
    match (head, args.as_slice()) {
        (Term::Var(k), []) => Ok(FOTerm::Var(*k)),
        (Term::Const(ConstName::Empty, _), []) => Ok(FOTerm::Empty),
        (Term::Const(ConstName::Union, _), [a]) => {
            Ok(FOTerm::Union(Box::new(fo_term_of(a)?)))
        }
        (Term::Const(ConstName::Power, _), [a]) => {
            Ok(FOTerm::Power(Box::new(fo_term_of(a)?)))
        }
        (Term::Const(ConstName::Repl, _), [dom, Term::Lam(Type::Ind, body)]) => Ok(
            FOTerm::Repl(Box::new(fo_term_of(dom)?), Box::new(fo_term_of(body)?)),
        ),
        (Term::Ref(n, tys), _) if tys.is_empty() => match (&**n, args.as_slice()) {
            ("UPair", [a, b]) => Ok(FOTerm::UPair(
                Box::new(fo_term_of(a)?),
                Box::new(fo_term_of(b)?),
            )),
            ("Sing", [a]) => Ok(FOTerm::Sing(Box::new(fo_term_of(a)?))),
            ("Sep", [dom, Term::Lam(Type::Ind, pred)]) => Ok(FOTerm::Sep(
                Box::new(fo_term_of(dom)?),
                Box::new(fo_sentence_of(pred)?),
            )),
            ("ReplSep", [dom, Term::Lam(Type::Ind, pred), Term::Lam(Type::Ind, elem)]) => {
                Ok(FOTerm::ReplSep(
                    Box::new(fo_term_of(dom)?),
                    Box::new(fo_sentence_of(pred)?),
                    Box::new(fo_term_of(elem)?),
                ))
            }
            (other, _) => nfo(format!("set-level reference {other}")),
        },
        _ => nfo(format!("term head {head:?}")),
    }
}

/// Recognizes a desugared kernel proposition as a first-order sentence.
pub fn fo_sentence_of(t: &Term) -> Result<FOSentence, HfError> {
    match t {
        Term::Imp(a, b) => Ok(FOSentence::Imp(
            Box::new(fo_sentence_of(a)?),
            Box::new(fo_sentence_of(b)?),
        )),
        Term::All(Type::Ind, body) => {
            // `forall x :e t, phi` arrives as `forall x. x :e t -> phi`.
            if let Term::Imp(guard, inner) = &**body {
                let (h, args) = spine(guard);
                if let (Term::Const(ConstName::In, _), [Term::Var(0), dom]) = (h, args.as_slice())
                {
                    if !dom.free_in(0) {
                        return Ok(FOSentence::ForallIn(
                            fo_term_of(&unlift(dom)?)?,
                            Box::new(fo_sentence_of(inner)?),
                        ));
                    }
                }
            }
            Ok(FOSentence::ForallRank(Box::new(fo_sentence_of(body)?)))
        }
        Term::All(_, _) => nfo("higher-order quantifier"),
        _ => {
            let (head, args) = spine(t);
            match (head, args.as_slice()) {
                (Term::Const(ConstName::In, _), [a, b]) => Ok(FOSentence::In(
                    fo_term_of(a)?,
                    fo_term_of(b)?,
                )),
                (Term::Ref(n, tys), _) => match (&**n, tys.as_slice(), args.as_slice()) {
                    ("False", [], []) => Ok(FOSentence::Falsum),
                    ("not", [], [a]) => Ok(FOSentence::Not(Box::new(fo_sentence_of(a)?))),
                    ("and", [], [a, b]) => Ok(FOSentence::And(
                        Box::new(fo_sentence_of(a)?),
                        Box::new(fo_sentence_of(b)?),
                    )),
                    ("or", [], [a, b]) => Ok(FOSentence::Or(
                        Box::new(fo_sentence_of(a)?),
                        Box::new(fo_sentence_of(b)?),
                    )),
                    ("iff", [], [a, b]) => Ok(FOSentence::Iff(
                        Box::new(fo_sentence_of(a)?),
                        Box::new(fo_sentence_of(b)?),
                    )),
                    ("eq", [Type::Ind], [a, b]) => {
                        Ok(FOSentence::Eq(fo_term_of(a)?, fo_term_of(b)?))
                    }
                    ("Subq", [], [a, b]) => Ok(FOSentence::Subq(fo_term_of(a)?, fo_term_of(b)?)),
                    ("ex", [Type::Ind], [Term::Lam(Type::Ind, body)]) => {
                        // `exists x :e t, phi` arrives as `exists x. x :e t /\ phi`.
                        let (bh, bargs) = spine(body);
                        if let (Term::Ref(bn, btys), [guard, inner]) = (bh, bargs.as_slice()) {
                            if &**bn == "and" && btys.is_empty() {
                                let (gh, gargs) = spine(guard);
                                if let (Term::Const(ConstName::In, _), [Term::Var(0), dom]) =
                                    (gh, gargs.as_slice())
                                {
                                    if !dom.free_in(0) {
                                        return Ok(FOSentence::ExistsIn(
                                            fo_term_of(&unlift(dom)?)?,
                                            Box::new(fo_sentence_of(inner)?),
                                        ));
                                    }
                                }
                            }
                        }
                        Ok(FOSentence::ExistsRank(Box::new(fo_sentence_of(body)?)))
                    }
                    (other, _, _) => nfo(format!("reference {other}")),
                },
                _ => nfo(format!("proposition head {head:?}")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universe_sizes() {
        assert_eq!(universe(0).unwrap().len(), 0);
        assert_eq!(universe(1).unwrap().len(), 1);
        assert_eq!(universe(2).unwrap().len(), 2);
        assert_eq!(universe(3).unwrap().len(), 4);
        assert_eq!(universe(4).unwrap().len(), 16);
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(universe(6).unwrap_err(), HfError::BudgetExceeded(6));
        assert!(hf_eval(&FOSentence::Falsum, 6).is_err());
    }

    #[test]
    fn empty_axiom_instance() {
        // no x with x :e Empty, at rank 3
        let s = FOSentence::Not(Box::new(FOSentence::ExistsRank(Box::new(FOSentence::In(
            FOTerm::Var(0),
            FOTerm::Empty,
        )))));
        assert!(hf_eval(&s, 3).unwrap());
    }

    #[test]
    fn upair_characteristic_instance() {
        // forall z. z :e {Empty, {Empty}} <-> z = Empty \/ z = {Empty}
        let upair = FOTerm::UPair(
            Box::new(FOTerm::Empty),
            Box::new(FOTerm::Sing(Box::new(FOTerm::Empty))),
        );
        let s = FOSentence::ForallRank(Box::new(FOSentence::Iff(
            Box::new(FOSentence::In(FOTerm::Var(0), upair)),
            Box::new(FOSentence::Or(
                Box::new(FOSentence::Eq(FOTerm::Var(0), FOTerm::Empty)),
                Box::new(FOSentence::Eq(
                    FOTerm::Var(0),
                    FOTerm::Sing(Box::new(FOTerm::Empty)),
                )),
            )),
        )));
        assert!(hf_eval(&s, 3).unwrap());
        assert!(hf_eval(&s, 4).unwrap());
    }

    #[test]
    fn power_characteristic_instance() {
        // forall Y. Y :e Power {Empty} <-> Y c= {Empty}
        let sing = FOTerm::Sing(Box::new(FOTerm::Empty));
        let s = FOSentence::ForallRank(Box::new(FOSentence::Iff(
            Box::new(FOSentence::In(
                FOTerm::Var(0),
                FOTerm::Power(Box::new(sing.clone())),
            )),
            Box::new(FOSentence::Subq(FOTerm::Var(0), sing)),
        )));
        assert!(hf_eval(&s, 3).unwrap());
    }

    #[test]
    fn falsity_is_detected() {
        let s = FOSentence::In(FOTerm::Empty, FOTerm::Empty);
        assert!(!hf_eval(&s, 2).unwrap());
    }

    #[test]
    fn union_and_sep_evaluate() {
        // Union (Power Empty) = Empty
        let s = FOSentence::Eq(
            FOTerm::Union(Box::new(FOTerm::Power(Box::new(FOTerm::Empty)))),
            FOTerm::Empty,
        );
        assert!(hf_eval(&s, 3).unwrap());
        // Empty :e {x :e Power Empty | x = x}
        let s2 = FOSentence::In(
            FOTerm::Empty,
            FOTerm::Sep(
                Box::new(FOTerm::Power(Box::new(FOTerm::Empty))),
                Box::new(FOSentence::Eq(FOTerm::Var(0), FOTerm::Var(0))),
            ),
        );
        assert!(hf_eval(&s2, 3).unwrap());
    }

    #[test]
    fn conversion_recognizes_membership() {
        use crate::term::Term as T;
        let t = T::apps(
            T::cst(ConstName::In),
            [T::cst(ConstName::Empty), T::cst(ConstName::Empty)],
        );
        assert_eq!(
            fo_sentence_of(&t).unwrap(),
            FOSentence::In(FOTerm::Empty, FOTerm::Empty)
        );
    }

    #[test]
    fn conversion_rejects_higher_order() {
        use crate::term::Term as T;
        let t = T::all(Type::Prop, T::Var(0));
        assert!(fo_sentence_of(&t).is_err());
    }
}
