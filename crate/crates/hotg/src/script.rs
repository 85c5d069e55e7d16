//! Deterministic elaboration of proof scripts into kernel proof terms.
//!
//! The elaborator is sugar only: no search, no unification. Every step maps
//! to a fixed proof-term shape, and the kernel re-checks the result, so
//! nothing here is trusted. Errors carry the source position of the step
//! that failed and print both sides of any mismatch.

use crate::kernel::{KernelError, Proof, Signature};
use crate::syntax::ast::{SStep, STerm};
use crate::syntax::desugar::{desugar, desugar_type, Env, Local};
use crate::syntax::lex::Pos;
use crate::syntax::print::print_term;
use crate::term::{
    beta_eta_nf, conv_unchecked, instantiate_types_raw, subst, Name, Opacity, SigView, Term,
    Type, TypingContext, Unfold,
};

#[derive(Clone, Debug)]
pub struct ScriptError {
    pub pos: Pos,
    pub message: String,
}

impl std::fmt::Display for ScriptError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ScriptError {}

fn fail<T>(pos: Pos, message: impl Into<String>) -> Result<T, ScriptError> {
    Err(ScriptError { pos, message: message.into() })
}

/// The elaboration state: typing context with names, hypotheses, script
/// locals, and the current goal.
#[derive(Clone)]
struct St<'a> {
    sig: &'a Signature,
    ty_var_names: &'a [String],
    vars: Vec<(String, Type)>,
    hyps: Vec<(Name, Term)>,
    locals: Vec<Local>,
    goal: Term,
}

impl<'a> St<'a> {
    fn env(&self) -> Env<'a> {
        let mut env = Env::new(self.sig, self.ty_var_names);
        env.vars = self.vars.clone();
        env.locals = self.locals.clone();
        env
    }

    fn names(&self) -> Vec<String> {
        self.vars.iter().map(|(n, _)| n.clone()).collect()
    }

    fn show(&self, t: &Term) -> String {
        print_term(t, &self.names(), self.ty_var_names)
    }

    fn conv(&self, a: &Term, b: &Term) -> bool {
        conv_unchecked(a, b, self.sig, Unfold::Transparent)
    }

    fn has_hyp(&self, name: &str) -> bool {
        self.hyps.iter().any(|(n, _)| &**n == name)
    }

    fn desugar_prop(&self, t: &STerm) -> Result<Term, ScriptError> {
        let mut env = self.env();
        let (term, ty) = desugar(&mut env, t).map_err(|e| ScriptError {
            pos: e.pos,
            message: e.message,
        })?;
        if ty != Type::Prop {
            return fail(t.pos, "expected a proposition");
        }
        Ok(term)
    }
}

/// Weak-head normalization that keeps unfolding transparent head references
/// until `want` matches (or nothing more can be unfolded).
fn whnf_to(sig: &Signature, t: &Term, want: impl Fn(&Term) -> bool) -> Term {
    let mut cur = beta_eta_nf(t, sig, Unfold::None);
    loop {
        if want(&cur) {
            return cur;
        }
        let mut head = &cur;
        while let Term::App(f, _) = head {
            head = f;
        }
        let Term::Ref(name, tys) = head else { return cur };
        let Some(def) = sig.lookup_def(name) else { return cur };
        if def.opacity != Opacity::Transparent {
            return cur;
        }
        let body = instantiate_types_raw(def.body, tys);
        cur = beta_eta_nf(&replace_head(&cur, body), sig, Unfold::None);
    }
}

fn replace_head(t: &Term, new_head: Term) -> Term {
    match t {
        Term::App(f, a) => Term::app(replace_head(f, new_head), (**a).clone()),
        _ => new_head,
    }
}

fn spine_of(t: &Term) -> (&Term, Vec<&Term>) {
    let mut spine = Vec::new();
    let mut head = t;
    while let Term::App(f, a) = head {
        spine.push(&**a);
        head = f;
    }
    spine.reverse();
    (head, spine)
}

fn is_ref_spine(t: &Term, name: &str, args: usize) -> bool {
    let (head, spine) = spine_of(t);
    matches!(head, Term::Ref(n, _) if &**n == name) && spine.len() == args
}

/// `exists x:ty, body` shape: returns the element type and the predicate.
fn dest_ex(sig: &Signature, t: &Term) -> Option<(Type, Term)> {
    let w = whnf_to(sig, t, |u| is_ref_spine(u, "ex", 1));
    let (head, spine) = spine_of(&w);
    match (head, spine.as_slice()) {
        (Term::Ref(n, tys), [p]) if &**n == "ex" && tys.len() == 1 => {
            Some((tys[0].clone(), (*p).clone()))
        }
        _ => None,
    }
}

/// `a \/ b` shape: returns both disjuncts.
fn dest_or(sig: &Signature, t: &Term) -> Option<(Term, Term)> {
    let w = whnf_to(sig, t, |u| is_ref_spine(u, "or", 2));
    let (head, spine) = spine_of(&w);
    match (head, spine.as_slice()) {
        (Term::Ref(n, tys), [a, b]) if &**n == "or" && tys.is_empty() => {
            Some(((*a).clone(), (*b).clone()))
        }
        _ => None,
    }
}

/// Elaborates a proof script against a goal. The resulting proof still has
/// to pass the kernel; the elaborator itself is untrusted.
pub fn elaborate(
    sig: &Signature,
    ty_var_names: &[String],
    goal: Term,
    steps: &[SStep],
) -> Result<Proof, ScriptError> {
    let st = St {
        sig,
        ty_var_names,
        vars: Vec::new(),
        hyps: Vec::new(),
        locals: Vec::new(),
        goal,
    };
    let mut i = 0;
    let proof = elab(st, steps, &mut i)?;
    if i < steps.len() {
        return fail(steps[i].pos(), "step after the proof is already complete");
    }
    Ok(proof)
}

fn elab_block(st: St<'_>, steps: &[SStep], what: &str, pos: Pos) -> Result<Proof, ScriptError> {
    let mut i = 0;
    let proof = elab(st, steps, &mut i)?;
    if i < steps.len() {
        return fail(steps[i].pos(), format!("step after the {what} is already complete"));
    }
    let _ = pos;
    Ok(proof)
}

fn elab(mut st: St<'_>, steps: &[SStep], i: &mut usize) -> Result<Proof, ScriptError> {
    let Some(step) = steps.get(*i) else {
        return fail(
            steps.last().map(|s| s.pos()).unwrap_or_default(),
            "proof is incomplete: the goal is still open",
        );
    };
    *i += 1;
    match step {
        SStep::Let(names, ann, pos) => {
            let want_ty = match ann {
                Some(sty) => Some(
                    desugar_type(&st.env(), sty)
                        .map_err(|e| ScriptError { pos: e.pos, message: e.message })?,
                ),
                None => None,
            };
            let mut doms = Vec::new();
            for (name, npos) in names {
                let w = whnf_to(st.sig, &st.goal, |u| matches!(u, Term::All(..)));
                let Term::All(dom, body) = w else {
                    return fail(
                        *npos,
                        format!("let: goal is not universal: {}", st.show(&st.goal)),
                    );
                };
                if let Some(want) = &want_ty {
                    if *want != dom {
                        return fail(*npos, "let: annotation does not match the bound type");
                    }
                }
                // Hypotheses move under the new binder.
                for (_, h) in st.hyps.iter_mut() {
                    *h = crate::term::lift(h, 0, 1).expect("positive lift");
                }
                st.vars.push((name.clone(), dom.clone()));
                st.goal = (*body).clone();
                doms.push(dom);
            }
            let _ = pos;
            let mut proof = elab(st, steps, i)?;
            for dom in doms.into_iter().rev() {
                proof = Proof::AllIntro(dom, proof.into());
            }
            Ok(proof)
        }
        SStep::Assume(name, sprop, pos) => {
            if st.has_hyp(name) {
                return fail(*pos, format!("hypothesis name {name} already in use"));
            }
            let prop = st.desugar_prop(sprop)?;
            let w = whnf_to(st.sig, &st.goal, |u| matches!(u, Term::Imp(..)));
            let Term::Imp(ante, cons) = w else {
                return fail(
                    *pos,
                    format!("assume: goal is not an implication: {}", st.show(&st.goal)),
                );
            };
            if !st.conv(&prop, &ante) {
                return fail(
                    *pos,
                    format!(
                        "assume: stated {} but the goal assumes {}",
                        st.show(&prop),
                        st.show(&ante)
                    ),
                );
            }
            st.hyps.push((Name::from(name.as_str()), prop.clone()));
            st.goal = (*cons).clone();
            let body = elab(st, steps, i)?;
            Ok(Proof::ImpIntro(Name::from(name.as_str()), prop, body.into()))
        }
        SStep::Claim(name, sprop, sub, pos) => {
            if st.has_hyp(name) {
                return fail(*pos, format!("hypothesis name {name} already in use"));
            }
            let prop = st.desugar_prop(sprop)?;
            let mut sub_st = st.clone();
            sub_st.goal = prop.clone();
            let sub_proof = elab_block(sub_st, sub, "claim subproof", *pos)?;
            st.hyps.push((Name::from(name.as_str()), prop.clone()));
            let rest = elab(st, steps, i)?;
            // A claim is a cut: (name: prop -> goal) applied to the subproof.
            Ok(Proof::imp_elim(
                Proof::ImpIntro(Name::from(name.as_str()), prop, rest.into()),
                sub_proof,
            ))
        }
        SStep::SetLocal(name, sty, sbody, pos) => {
            let ty = desugar_type(&st.env(), sty)
                .map_err(|e| ScriptError { pos: e.pos, message: e.message })?;
            let mut env = st.env();
            let (body, bty) =
                desugar(&mut env, sbody).map_err(|e| ScriptError { pos: e.pos, message: e.message })?;
            if bty != ty {
                return fail(*pos, "set: body does not have the declared type");
            }
            st.locals.push(Local { name: name.clone(), ty, body, depth: st.vars.len() });
            elab(st, steps, i)
        }
        SStep::Exact(pe, pos) => {
            let (proof, prop) = elab_pexpr(&st, pe)?;
            if !st.conv(&prop, &st.goal) {
                return fail(
                    *pos,
                    format!(
                        "exact: proves {} but the goal is {}",
                        st.show(&prop),
                        st.show(&st.goal)
                    ),
                );
            }
            Ok(proof)
        }
        SStep::Apply(pe, pos) => {
            let (head_proof, head_prop) = elab_pexpr(&st, pe)?;
            let mut antecedents = Vec::new();
            let mut cur = head_prop;
            while !st.conv(&cur, &st.goal) {
                let w = whnf_to(st.sig, &cur, |u| matches!(u, Term::Imp(..)));
                match w {
                    Term::Imp(a, b) => {
                        antecedents.push((*a).clone());
                        cur = (*b).clone();
                    }
                    _ => {
                        return fail(
                            *pos,
                            format!(
                                "apply: conclusion {} does not match the goal {}",
                                st.show(&cur),
                                st.show(&st.goal)
                            ),
                        )
                    }
                }
            }
            let mut proof = head_proof;
            for ante in antecedents {
                let mut sub_st = st.clone();
                sub_st.goal = ante;
                let sub = elab(sub_st, steps, i)?;
                proof = Proof::imp_elim(proof, sub);
            }
            Ok(proof)
        }
        SStep::Witness(swit, pos) => {
            let Some((elem_ty, pred)) = dest_ex(st.sig, &st.goal) else {
                return fail(
                    *pos,
                    format!("witness: goal is not an existential: {}", st.show(&st.goal)),
                );
            };
            if st.sig.theorem("exI").is_none() {
                return fail(*pos, "witness needs the prelude theorem exI");
            }
            let mut env = st.env();
            let (w, wty) =
                desugar(&mut env, swit).map_err(|e| ScriptError { pos: e.pos, message: e.message })?;
            if wty != elem_ty {
                return fail(*pos, "witness: term does not have the quantified type");
            }
            st.goal = beta_eta_nf(&Term::app(pred.clone(), w.clone()), st.sig, Unfold::None);
            let sub = elab(st, steps, i)?;
            Ok(Proof::imp_elim(
                Proof::all_elim(
                    Proof::all_elim(Proof::Known(Name::from("exI"), vec![elem_ty]), pred),
                    w,
                ),
                sub,
            ))
        }
        SStep::Cases(pe, h1, h2, left, right, pos) => {
            for h in [h1, h2] {
                if st.has_hyp(h) {
                    return fail(*pos, format!("hypothesis name {h} already in use"));
                }
            }
            let (dis_proof, dis_prop) = elab_pexpr(&st, pe)?;
            let Some((a, b)) = dest_or(st.sig, &dis_prop) else {
                return fail(
                    *pos,
                    format!("cases: expression proves {}, not a disjunction", st.show(&dis_prop)),
                );
            };
            if st.sig.theorem("orE").is_none() {
                return fail(*pos, "cases needs the prelude theorem orE");
            }
            let mut left_st = st.clone();
            left_st.hyps.push((Name::from(h1.as_str()), a.clone()));
            let left_proof = elab_block(left_st, left, "left case", *pos)?;
            let mut right_st = st.clone();
            right_st.hyps.push((Name::from(h2.as_str()), b.clone()));
            let right_proof = elab_block(right_st, right, "right case", *pos)?;
            let spine = Proof::all_elim(
                Proof::all_elim(
                    Proof::all_elim(Proof::Known(Name::from("orE"), vec![]), a.clone()),
                    b.clone(),
                ),
                st.goal.clone(),
            );
            Ok(Proof::imp_elim(
                Proof::imp_elim(
                    Proof::imp_elim(spine, dis_proof),
                    Proof::ImpIntro(Name::from(h1.as_str()), a, left_proof.into()),
                ),
                Proof::ImpIntro(Name::from(h2.as_str()), b, right_proof.into()),
            ))
        }
        SStep::Prove(sprop, pos) => {
            let prop = st.desugar_prop(sprop)?;
            if !st.conv(&prop, &st.goal) {
                return fail(
                    *pos,
                    format!(
                        "prove: stated {} is not convertible with the goal {}",
                        st.show(&prop),
                        st.show(&st.goal)
                    ),
                );
            }
            st.goal = prop;
            elab(st, steps, i)
        }
    }
}

/// Elaborates a proof expression: a spine whose head names a hypothesis,
/// theorem or axiom, applied to terms (universal elimination) and proofs
/// (implication elimination). The synthesized proposition decides which.
fn elab_pexpr(st: &St<'_>, pe: &STerm) -> Result<(Proof, Term), ScriptError> {
    use crate::syntax::ast::SKind;
    match &pe.kind {
        SKind::Name(name, ty_args) => {
            if ty_args.is_none() {
                if let Some((_, prop)) = st.hyps.iter().rev().find(|(n, _)| &**n == name.as_str()) {
                    return Ok((Proof::Hyp(Name::from(name.as_str())), prop.clone()));
                }
            }
            let tys = match ty_args {
                Some(stys) => stys
                    .iter()
                    .map(|s| desugar_type(&st.env(), s))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| ScriptError { pos: e.pos, message: e.message })?,
                None => Vec::new(),
            };
            match st.sig.known_statement(name, &tys) {
                Ok(prop) => Ok((Proof::Known(Name::from(name.as_str()), tys), prop)),
                Err(KernelError::UnknownRef(_)) => {
                    let mut env = st.env();
                    if desugar(&mut env, pe).is_ok() {
                        fail(pe.pos, format!("{name} is a term, not a proof"))
                    } else {
                        fail(pe.pos, format!("unknown hypothesis or theorem {name}"))
                    }
                }
                Err(e) => fail(pe.pos, e.to_string()),
            }
        }
        SKind::App(f, a) => {
            let (fp, fprop) = elab_pexpr(st, f)?;
            let w = whnf_to(st.sig, &fprop, |u| matches!(u, Term::Imp(..) | Term::All(..)));
            match w {
                Term::All(dom, body) => {
                    let mut env = st.env();
                    let (arg, arg_ty) = desugar(&mut env, a)
                        .map_err(|e| ScriptError { pos: e.pos, message: e.message })?;
                    if arg_ty != dom {
                        return fail(
                            a.pos,
                            format!(
                                "instantiation has type {}, the quantifier expects {}",
                                crate::syntax::print::print_type(&arg_ty, st.ty_var_names),
                                crate::syntax::print::print_type(&dom, st.ty_var_names)
                            ),
                        );
                    }
                    let next = subst(&body, 0, &arg);
                    Ok((Proof::all_elim(fp, arg), next))
                }
                Term::Imp(ante, cons) => {
                    let (ap, aprop) = elab_pexpr(st, a)?;
                    if !st.conv(&aprop, &ante) {
                        return fail(
                            a.pos,
                            format!(
                                "argument proves {} but {} is expected",
                                st.show(&aprop),
                                st.show(&ante)
                            ),
                        );
                    }
                    Ok((Proof::imp_elim(fp, ap), (*cons).clone()))
                }
                other => fail(
                    f.pos,
                    format!(
                        "cannot apply: proves {}, neither an implication nor a universal",
                        st.show(&other)
                    ),
                ),
            }
        }
        _ => fail(pe.pos, "expected a proof expression (a name applied to arguments)"),
    }
}

/// Runs an elaborated proof through the kernel against a statement, as
/// `add_theorem` would. Used by tests and examples that do not want to
/// extend a signature.
pub fn recheck(
    sig: &Signature,
    ty_vars: u8,
    proof: &Proof,
    statement: &Term,
) -> Result<(), KernelError> {
    let ctx = TypingContext::new(ty_vars);
    let proved = crate::kernel::check_proof(sig, &ctx, &[], proof)?;
    if !conv_unchecked(&proved, statement, sig, Unfold::Transparent) {
        return Err(KernelError::ProofDoesNotMatchStatement {
            statement: statement.clone(),
            proved,
        });
    }
    Ok(())
}
