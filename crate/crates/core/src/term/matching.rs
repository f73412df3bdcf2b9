//! Matching modulo associativity, commutativity and identity.
//!
//! The matcher works by continuation passing over a worklist of pending
//! (pattern, subject) pairs. Associative-commutative arguments are matched
//! as multisets with backtracking over the ways of splitting the subject
//! among the pattern variables; associative-only arguments as sequences.

use super::{OpId, Signature, Substitution, Term, Var};

type Pending = Vec<(Term, Term)>;

/// Calls `k` for every match of `pattern` against `subject` extending
/// `init`. `k` returns `true` to stop the enumeration; the function returns
/// whether it was stopped.
pub(crate) fn for_each_match(
    sig: &Signature,
    pattern: &Term,
    subject: &Term,
    init: &Substitution,
    k: &mut dyn FnMut(&Substitution) -> bool,
) -> bool {
    let m = Matcher { sig };
    m.solve(vec![(pattern.clone(), subject.clone())], init.clone(), k)
}

/// All matches of `pattern` against `subject` extending `init`, without
/// repetitions, in enumeration order.
pub fn match_term(sig: &Signature, pattern: &Term, subject: &Term, init: &Substitution) -> Vec<Substitution> {
    let mut out: Vec<Substitution> = Vec::new();
    for_each_match(sig, pattern, subject, init, &mut |s| {
        if !out.contains(s) {
            out.push(s.clone());
        }
        false
    });
    out
}

/// All matches starting from the empty substitution.
pub fn match_all(sig: &Signature, pattern: &Term, subject: &Term) -> Vec<Substitution> {
    match_term(sig, pattern, subject, &Substitution::new())
}

/// The first match, if any.
pub fn match_first(sig: &Signature, pattern: &Term, subject: &Term, init: &Substitution) -> Option<Substitution> {
    let mut found = None;
    for_each_match(sig, pattern, subject, init, &mut |s| {
        found = Some(s.clone());
        true
    });
    found
}

struct Matcher<'a> {
    sig: &'a Signature,
}

impl Matcher<'_> {
    fn solve(&self, mut pending: Pending, s: Substitution, k: &mut dyn FnMut(&Substitution) -> bool) -> bool {
        let Some((p, t)) = pending.pop() else {
            return k(&s);
        };
        match &p {
            Term::Var(v) => match self.bind(&s, v, t) {
                Some(s2) => self.solve(pending, s2, k),
                None => false,
            },
            Term::App(f, ps) => {
                let attrs = &self.sig.op(*f).attrs;
                if attrs.assoc {
                    let elems = self.sig.assoc_view(*f, &t);
                    if attrs.comm {
                        self.match_ac(*f, ps.clone(), group(elems), pending, s, k)
                    } else {
                        self.match_a(*f, ps, &elems, pending, s, k)
                    }
                } else if attrs.comm {
                    self.match_comm(*f, ps, &t, pending, s, k)
                } else {
                    match &t {
                        Term::App(g, ts) if g == f && ts.len() == ps.len() => {
                            pending.extend(ps.iter().cloned().zip(ts.iter().cloned()));
                            self.solve(pending, s, k)
                        }
                        _ => false,
                    }
                }
            }
        }
    }

    /// Binds or checks a single variable.
    fn bind(&self, s: &Substitution, v: &Var, t: Term) -> Option<Substitution> {
        match s.get(v) {
            Some(bound) => (*bound == t).then(|| s.clone()),
            None => {
                if !self.sig.leq(self.sig.sort_of(&t), v.sort) {
                    return None;
                }
                let mut s2 = s.clone();
                s2.insert(v.clone(), t);
                Some(s2)
            }
        }
    }

    fn match_comm(
        &self,
        f: OpId,
        ps: &[Term],
        t: &Term,
        pending: Pending,
        s: Substitution,
        k: &mut dyn FnMut(&Substitution) -> bool,
    ) -> bool {
        let pairs: Vec<(Term, Term)> = match t {
            Term::App(g, ts) if *g == f => vec![(ts[0].clone(), ts[1].clone())],
            _ => match &self.sig.op(f).attrs.identity {
                Some(id) => vec![(t.clone(), id.clone())],
                None => return false,
            },
        };
        for (a, b) in pairs {
            let mut orders = vec![(a.clone(), b.clone())];
            if a != b {
                orders.push((b, a));
            }
            for (x, y) in orders {
                let mut p2 = pending.clone();
                p2.push((ps[1].clone(), y));
                p2.push((ps[0].clone(), x));
                if self.solve(p2, s.clone(), k) {
                    return true;
                }
            }
        }
        false
    }

    /// The value a variable takes when it absorbs `elems` under `f`.
    fn collect(&self, f: OpId, v: &Var, elems: Vec<Term>) -> Option<Term> {
        if elems.is_empty() {
            if v.is_extension() {
                // marker flattened away when the substitution is applied
                return Some(Term::App(f, Vec::new()));
            }
            return self.sig.op(f).attrs.identity.clone();
        }
        Some(self.sig.make(f, elems))
    }

    fn can_be_empty(&self, f: OpId, v: &Var) -> bool {
        v.is_extension() || self.sig.op(f).attrs.identity.is_some()
    }

    fn match_ac(
        &self,
        f: OpId,
        mut ps: Vec<Term>,
        remaining: Vec<(Term, usize)>,
        pending: Pending,
        s: Substitution,
        k: &mut dyn FnMut(&Substitution) -> bool,
    ) -> bool {
        if ps.is_empty() {
            return remaining.is_empty() && self.solve(pending, s, k);
        }
        // Bound variables and non-variable patterns first.
        let fixed = ps.iter().position(|p| match p {
            Term::Var(v) => s.contains(v),
            Term::App(..) => true,
        });
        if let Some(i) = fixed {
            let p = ps.remove(i);
            if let Term::Var(v) = &p {
                let value = s.get(v).unwrap().clone();
                let want = if value == Term::App(f, Vec::new()) { Vec::new() } else { self.sig.assoc_view(f, &value) };
                return match subtract(&remaining, &want) {
                    Some(rest) => self.match_ac(f, ps, rest, pending, s, k),
                    None => false,
                };
            }
            for idx in 0..remaining.len() {
                let elem = remaining[idx].0.clone();
                let mut rest = remaining.clone();
                take_one(&mut rest, idx);
                // match the element, then continue with the other arguments
                let mut stopped = false;
                let ps2 = ps.clone();
                let pending2 = pending.clone();
                let inner = for_each_match(self.sig, &p, &elem, &s, &mut |s2| {
                    if self.match_ac(f, ps2.clone(), rest.clone(), pending2.clone(), s2.clone(), k) {
                        stopped = true;
                    }
                    stopped
                });
                if inner || stopped {
                    return true;
                }
            }
            // A non-variable pattern may also collapse to the identity.
            if let Some(id) = &self.sig.op(f).attrs.identity {
                let mut stopped = false;
                let ps2 = ps.clone();
                let rem2 = remaining.clone();
                let inner = self.solve(vec![(p, id.clone())], s, &mut |s2| {
                    if self.match_ac(f, ps2.clone(), rem2.clone(), pending.clone(), s2.clone(), k) {
                        stopped = true;
                    }
                    stopped
                });
                return inner || stopped;
            }
            return false;
        }
        // Only unbound variables left: give the first one a sub-multiset.
        let Term::Var(v) = ps.remove(0) else { unreachable!() };
        let total: usize = remaining.iter().map(|(_, n)| n).sum();
        let mut choice = vec![0usize; remaining.len()];
        loop {
            let size: usize = choice.iter().sum();
            let admissible = !ps.is_empty() || size == total;
            if admissible && (size > 0 || self.can_be_empty(f, &v)) {
                let mut elems = Vec::with_capacity(size);
                let mut rest = Vec::new();
                for ((t, n), &c) in remaining.iter().zip(&choice) {
                    elems.extend(std::iter::repeat_n(t.clone(), c));
                    if n - c > 0 {
                        rest.push((t.clone(), n - c));
                    }
                }
                if let Some(value) = self.collect(f, &v, elems) {
                    if let Some(s2) = self.bind(&s, &v, value) {
                        if self.match_ac(f, ps.clone(), rest, pending.clone(), s2, k) {
                            return true;
                        }
                    }
                }
            }
            // next choice vector (mixed radix counter)
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return false;
                }
                if choice[i] < remaining[i].1 {
                    choice[i] += 1;
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    fn match_a(
        &self,
        f: OpId,
        ps: &[Term],
        elems: &[Term],
        pending: Pending,
        s: Substitution,
        k: &mut dyn FnMut(&Substitution) -> bool,
    ) -> bool {
        let Some((p, ps_rest)) = ps.split_first() else {
            return elems.is_empty() && self.solve(pending, s, k);
        };
        match p {
            Term::Var(v) if !s.contains(v) => {
                let min = if self.can_be_empty(f, v) { 0 } else { 1 };
                let range: Vec<usize> = if ps_rest.is_empty() {
                    if elems.len() >= min {
                        vec![elems.len()]
                    } else {
                        vec![]
                    }
                } else {
                    (min..=elems.len()).collect()
                };
                for n in range {
                    let Some(value) = self.collect(f, v, elems[..n].to_vec()) else { continue };
                    if let Some(s2) = self.bind(&s, v, value) {
                        if self.match_a(f, ps_rest, &elems[n..], pending.clone(), s2, k) {
                            return true;
                        }
                    }
                }
                false
            }
            Term::Var(v) => {
                let value = s.get(v).unwrap();
                let want = if *value == Term::App(f, Vec::new()) { Vec::new() } else { self.sig.assoc_view(f, value) };
                if elems.len() >= want.len() && elems[..want.len()] == want[..] {
                    self.match_a(f, ps_rest, &elems[want.len()..], pending, s, k)
                } else {
                    false
                }
            }
            Term::App(..) => {
                let Some((first, rest)) = elems.split_first() else {
                    return false;
                };
                let mut stopped = false;
                let inner = for_each_match(self.sig, p, first, &s, &mut |s2| {
                    if self.match_a(f, ps_rest, rest, pending.clone(), s2.clone(), k) {
                        stopped = true;
                    }
                    stopped
                });
                inner || stopped
            }
        }
    }
}

/// Groups sorted terms into (term, multiplicity) pairs.
fn group(mut elems: Vec<Term>) -> Vec<(Term, usize)> {
    elems.sort();
    let mut out: Vec<(Term, usize)> = Vec::new();
    for e in elems {
        match out.last_mut() {
            Some((t, n)) if *t == e => *n += 1,
            _ => out.push((e, 1)),
        }
    }
    out
}

fn take_one(ms: &mut Vec<(Term, usize)>, idx: usize) {
    ms[idx].1 -= 1;
    if ms[idx].1 == 0 {
        ms.remove(idx);
    }
}

/// Multiset difference, `None` if `want` is not contained in `ms`.
fn subtract(ms: &[(Term, usize)], want: &[Term]) -> Option<Vec<(Term, usize)>> {
    let mut out = ms.to_vec();
    for w in want {
        let idx = out.iter().position(|(t, _)| t == w)?;
        take_one(&mut out, idx);
    }
    Some(out)
}
