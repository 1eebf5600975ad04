//! An ordered-union instance that is not a 1-CR set, checked on finite
//! truncations.
//!
//! Ground set `D = {1-1/t : 1<=t<=T} ∪ {1,…,T}`, `L = {{1}}` and
//! `f_n(t) = {1-1/t}` for `t <= n`, `{t}` for `t > n`. Every element of
//! `σ(L)` has minimum above 1, while any opening `a(1)*f_r(t(1))` with
//! `t(1) <= r` needs `max a(1) < 1-1/t(1) < 1`.

use num_rational::Rational64;

use crate::jcr::{self, JcrError, Witness};
use crate::outcome::SearchOutcome;
use crate::psg::{ElemId, Element, PsgError, PsgInstance};
use crate::sequences::SeqPrefix;
use crate::set::ElemSet;

/// `1 - 1/t`.
pub fn below_one(t: usize) -> Rational64 {
    Rational64::new(t as i64 - 1, t as i64)
}

/// The truncated instance, `L = {{1}}`, and `f_1, …, f_T` (each of length `T`).
pub struct Snotcr {
    pub depth: usize,
    pub psg: PsgInstance,
    pub l: Vec<ElemId>,
    pub family: Vec<SeqPrefix>,
}

fn singleton(psg: &PsgInstance, x: Rational64) -> Result<ElemId, PsgError> {
    psg.id_of(&Element::RatSet(vec![x]))
}

impl Snotcr {
    pub fn build(depth: usize) -> Result<Self, PsgError> {
        if depth < 2 {
            return Err(PsgError::InvalidParameters(
                "truncation depth must be at least 2".into(),
            ));
        }
        let mut points: Vec<Rational64> = (1..=depth).map(below_one).collect();
        points.extend((1..=depth as i64).map(Rational64::from_integer));
        let psg = PsgInstance::finset_ordered(points)?;
        let l = vec![singleton(&psg, Rational64::from_integer(1))?];
        let family = (1..=depth)
            .map(|n| {
                let vals = (1..=depth)
                    .map(|t| {
                        let x = if t <= n {
                            below_one(t)
                        } else {
                            Rational64::from_integer(t as i64)
                        };
                        singleton(&psg, x)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                SeqPrefix::new(&psg, vals).map_err(|e| PsgError::InvalidParameters(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Snotcr {
            depth,
            psg,
            l,
            family,
        })
    }

    /// `f_n`, 1-based.
    pub fn f(&self, n: usize) -> &SeqPrefix {
        &self.family[n - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnotcrReport {
    pub depth: usize,
    pub universe: usize,
    /// `(r, outcome)` for the family `{f_r}` at radius `r`.
    pub per_radius: Vec<(usize, SearchOutcome<Witness>)>,
    /// Every member of `σ(L)` has minimum above 1.
    pub sigma_min_above_one: bool,
    /// `min f_r(t) = 1-1/t < 1` for all `t <= r <= T`.
    pub openings_below_one: bool,
}

impl SnotcrReport {
    pub fn all_proven_empty(&self) -> bool {
        self.per_radius.iter().all(|(_, o)| o.is_proven_empty())
    }
}

fn min_of(psg: &PsgInstance, x: ElemId) -> Option<Rational64> {
    match psg.element(x) {
        Element::RatSet(v) => v.first().copied(),
        _ => None,
    }
}

/// Runs the witness search for `{f_r}` at every radius `r <= T`.
pub fn snotcr_verify(depth: usize, m_max: usize) -> Result<SnotcrReport, SnotcrError> {
    let inst = Snotcr::build(depth)?;
    let psg = &inst.psg;
    let all = ElemSet::full(psg.len());
    let per_radius = (1..=depth)
        .map(|r| {
            let fam = [inst.f(r).clone()];
            jcr::witness_search(psg, &all, &inst.l, &fam, r, m_max).map(|o| (r, o))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let one = Rational64::from_integer(1);
    let sigma_min_above_one = psg
        .sigma(&inst.l)?
        .iter()
        .all(|x| min_of(psg, x).is_some_and(|m| m > one));
    let openings_below_one = (1..=depth).all(|r| {
        (1..=r).all(|t| min_of(psg, inst.f(r).at(t)) == Some(below_one(t)) && below_one(t) < one)
    });
    Ok(SnotcrReport {
        depth,
        universe: psg.len(),
        per_radius,
        sigma_min_above_one,
        openings_below_one,
    })
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SnotcrError {
    #[error(transparent)]
    Psg(#[from] PsgError),
    #[error(transparent)]
    Jcr(#[from] JcrError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outcome::Proof;

    #[test]
    fn depth_three() {
        let rep = snotcr_verify(3, 3).unwrap();
        assert_eq!(rep.universe, 63);
        assert!(rep.all_proven_empty());
        assert!(rep.sigma_min_above_one && rep.openings_below_one);
        assert_eq!(
            rep.per_radius[2].1,
            SearchOutcome::ProvenEmpty(Proof::OrderedInterval { radius: 3 })
        );
    }

    #[test]
    fn family_shape() {
        let s = Snotcr::build(4).unwrap();
        assert_eq!(s.f(2).show(&s.psg), "[{0},{1/2},{3},{4}]");
        assert_eq!(s.f(4).show(&s.psg), "[{0},{1/2},{2/3},{3/4}]");
        assert!(Snotcr::build(1).is_err());
    }

    #[test]
    fn disjoint_contrast() {
        let u = PsgInstance::finset_disjoint(12).unwrap();
        let l = [u.set_id(&[1]).unwrap()];
        let f = SeqPrefix::new(&u, (2..=5).map(|i| u.set_id(&[i]).unwrap()).collect()).unwrap();
        let out = jcr::witness_search(&u, &ElemSet::full(u.len()), &l, &[f], 3, 2).unwrap();
        assert!(out.is_found());
    }
}
