//! Worked counterexamples and examples as executable fixtures.
//!
//! Each fixture carries an instance, an optional highlighted allocation and
//! a list of claims that [`Fixture::check`] re-derives from scratch.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::ops::ControlFlow;

use serde::Serialize;

use super::{Notion, Oracle};
use crate::algorithms::{dispatch, iterated_priority_matching, iterated_swaps_from, select, Selection, SolveOptions};
use crate::constraints::{complementary_pairs, Complementarity, SetSystem, SetSystemSpec};
use crate::error::{Error, Result};
use crate::fairness::{self, is_pareto_efficient, nash_product, ParetoVerdict};
use crate::matroid::{Matroid, MatroidSpec};
use crate::model::{check_feasible, Allocation, Constraint, Instance, Item};
use crate::value::{format_product, int, Value};

pub const IDS: [&str; 9] = [
    "table2-mnw",
    "ex3.2-heterogeneous-categories",
    "ex3.3-matching",
    "ex3.4-conflict",
    "ex3.5-budget",
    "efx-uniform",
    "k4-graphic",
    "table3-weak-fef1",
    "sec6.1-non-pe",
];

#[derive(Debug, Clone)]
pub struct Fixture {
    pub id: &'static str,
    pub summary: &'static str,
    pub instance: Instance,
    pub highlighted: Option<Allocation>,
}

/// One re-derived claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub claim: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureOutcome {
    pub id: &'static str,
    pub claims: Vec<Claim>,
}

impl FixtureOutcome {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }
}

struct Claims(Vec<Claim>);

impl Claims {
    fn check(&mut self, claim: &str, expected: impl Display, observed: Result<impl Display>) {
        let expected = expected.to_string();
        let (observed, pass) = match observed {
            Ok(o) => {
                let o = o.to_string();
                let pass = o == expected;
                (o, pass)
            }
            Err(e) => (format!("error: {e}"), false),
        };
        self.0.push(Claim { claim: claim.into(), expected, observed, pass });
    }
}

fn ints(v: &[i64]) -> Vec<Value> {
    v.iter().map(|&x| int(x)).collect()
}

fn matroid(spec: MatroidSpec, ground: usize) -> Matroid {
    Matroid::from_spec(&spec, ground).expect("fixture matroids are valid")
}

fn partition(categories: Vec<Vec<Item>>, capacities: Vec<usize>) -> Matroid {
    let ground = categories.iter().map(Vec::len).sum();
    matroid(MatroidSpec::Partition { categories, capacities }, ground)
}

fn alloc(bundles: &[&[Item]]) -> Allocation {
    Allocation::new(bundles.iter().map(|b| b.to_vec()).collect())
}

fn shared(id: &str, valuations: Vec<Vec<Value>>, c: impl Into<Constraint>) -> Instance {
    let c = c.into();
    let n = valuations.len();
    Instance::new(valuations, vec![c; n]).expect("fixture instances are valid").named(id)
}

fn set_system(spec: SetSystemSpec, ground: usize) -> SetSystem {
    SetSystem::from_spec(&spec, ground).expect("fixture set systems are valid")
}

/// Edge list of `copies` disjoint copies of K4, edges ordered 12, 13, 14, 23, 24, 34 per copy.
pub fn k4_edges(copies: usize) -> Vec<(usize, usize)> {
    let base = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    (0..copies).flat_map(|c| base.iter().map(move |&(a, b)| (4 * c + a, 4 * c + b))).collect()
}

/// K4 instance with identical valuations, repeated `copies` times.
pub fn k4_instance(copies: usize) -> Instance {
    let edges = k4_edges(copies);
    let m = edges.len();
    let g = matroid(MatroidSpec::Graphic { vertices: 4 * copies, edges }, m);
    let row: Vec<Value> = (0..copies).flat_map(|_| ints(&[0, 1, 0, 1, 1, 0])).collect();
    shared(if copies == 1 { "k4-graphic" } else { "k4-graphic-double" }, vec![row.clone(), row], g)
}

/// The allocation giving the path 12-23-34 to the first agent in every copy.
pub fn k4_allocation(copies: usize) -> Allocation {
    let mut x = Allocation::empty(2);
    for c in 0..copies {
        x.extend_bundle(0, [0, 3, 5].map(|g| 6 * c + g));
        x.extend_bundle(1, [1, 2, 4].map(|g| 6 * c + g));
    }
    x
}

pub fn get(id: &str) -> Option<Fixture> {
    let f = |summary, instance, highlighted| Some(Fixture { id: IDS.into_iter().find(|&i| i == id)?, summary, instance, highlighted });
    match id {
        "table2-mnw" => {
            // Category 1: two items worth 1 to both, two worthless items.
            // Category 2: six items worth 1 to the second agent only.
            let mut a = ints(&[1, 1, 0, 0]);
            a.extend(ints(&[0; 6]));
            let mut b = ints(&[1, 1, 0, 0]);
            b.extend(ints(&[1; 6]));
            let m = partition(vec![(0..4).collect(), (4..10).collect()], vec![2, 3]);
            f(
                "maximum Nash welfare is not F-EF1 under identical partition constraints",
                shared(id, vec![a, b], m),
                Some(alloc(&[&[0, 1, 4, 5, 6], &[2, 3, 7, 8, 9]])),
            )
        }
        "ex3.2-heterogeneous-categories" => {
            let v = ints(&[1, 1, 0, 0]);
            let alice = partition(vec![vec![0, 2], vec![1, 3]], vec![1, 1]);
            let bob = partition(vec![vec![0], vec![1], vec![2, 3]], vec![1, 1, 0]);
            let inst = Instance::new(vec![v.clone(), v], vec![alice.into(), bob.into()])
                .expect("fixture instances are valid")
                .named(id);
            f(
                "partitions into different categories can rule out F-EF1",
                inst,
                Some(alloc(&[&[2, 3], &[0, 1]])),
            )
        }
        "ex3.3-matching" => {
            // Items: (physics, morning), (physics, evening), (chemistry, morning), (chemistry, evening).
            let s = set_system(SetSystemSpec::BipartiteMatching { edges: vec![(0, 0), (0, 1), (1, 0), (1, 1)] }, 4);
            let v = ints(&[1, 0, 0, 1]);
            f("matching constraints have complementary items", shared(id, vec![v.clone(), v], s), None)
        }
        "ex3.4-conflict" => {
            let s = set_system(SetSystemSpec::ConflictGraph { edges: vec![(0, 1), (1, 2), (2, 3), (3, 0)] }, 4);
            let v = ints(&[1, 0, 1, 0]);
            f("a conflict 4-cycle makes opposite vertices complementary", shared(id, vec![v.clone(), v], s), None)
        }
        "ex3.5-budget" => {
            let s = set_system(SetSystemSpec::Budget { costs: ints(&[10, 10, 20]), budget: int(20) }, 3);
            let v = ints(&[1, 1, 0]);
            f(
                "budget constraints whose only feasible split keeps two items together",
                shared(id, vec![v.clone(), v], s),
                Some(alloc(&[&[2], &[0, 1]])),
            )
        }
        "efx-uniform" => {
            let v = ints(&[0, 0, 0, 1]);
            f(
                "no EFX allocation under an identical uniform matroid",
                shared(id, vec![v.clone(), v], Matroid::uniform(4, 2)),
                None,
            )
        }
        "k4-graphic" => f(
            "the K4 graphic matroid is not base-orderable, which blocks single-item swaps",
            k4_instance(1),
            Some(k4_allocation(1)),
        ),
        "table3-weak-fef1" => {
            let v = ints(&[1, 1]);
            let inst = Instance::new(vec![v.clone(), v], vec![Matroid::uniform(2, 1).into(), Matroid::uniform(2, 2).into()])
                .expect("fixture instances are valid")
                .named(id);
            f("weak F-EF1 does not imply F-EF1", inst, Some(alloc(&[&[], &[0, 1]])))
        }
        "sec6.1-non-pe" => {
            // Items as (first agent, second agent) values: (0,1), (1,1), (1,0), (1,0).
            f(
                "iterated priority matching with capacity 2 can return a Pareto-dominated allocation",
                shared(id, vec![ints(&[0, 1, 1, 1]), ints(&[1, 1, 0, 0])], Matroid::uniform(4, 2)),
                Some(alloc(&[&[1, 2], &[0, 3]])),
            )
        }
        _ => None,
    }
}

pub fn all() -> Vec<Fixture> {
    IDS.iter().map(|id| get(id).expect("every listed fixture exists")).collect()
}

/// Every matroid appearing in a fixture, labelled `id/agent`, deduplicated per fixture.
pub fn matroids() -> Vec<(String, Matroid)> {
    let mut out: Vec<(String, Matroid)> = Vec::new();
    for fx in all() {
        let mut seen: Vec<&Matroid> = Vec::new();
        for (i, c) in fx.instance.constraints().iter().enumerate() {
            if let Some(m) = c.as_matroid() {
                if !seen.contains(&m) {
                    seen.push(m);
                    out.push((format!("{}/{i}", fx.id), m.clone()));
                }
            }
        }
    }
    out
}

fn yes(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn bool_of(r: Result<bool>) -> Result<&'static str> {
    r.map(yes)
}

fn exists(oracle: &Oracle, inst: &Instance, notion: Notion) -> Result<&'static str> {
    oracle.exists_fair(inst, notion).map(|w| yes(w.is_some()))
}

fn refusal(inst: &Instance) -> Result<String> {
    match dispatch(inst, &SolveOptions::default()) {
        Err(Error::Impossible { fixture, .. }) => Ok(format!("refused ({fixture})")),
        Err(e) => Err(e),
        Ok(s) => Ok(format!("ran {}", s.algorithm)),
    }
}

fn pairs(s: &Constraint) -> Result<String> {
    let Constraint::SetSystem(s) = s else {
        return Err(Error::Input("not a set system".into()));
    };
    Ok(match complementary_pairs(s)? {
        Complementarity::Pairs(p) => format!("{p:?}"),
        Complementarity::NoFeasibleBipartition => "no feasible bipartition".into(),
    })
}

fn no_ef1_claims(c: &mut Claims, oracle: &Oracle, inst: &Instance, expected_pairs: &str) {
    c.check("complementary pairs", expected_pairs, pairs(inst.constraint(0)));
    for notion in [Notion::Ef1, Notion::Fef1, Notion::WeakFef1] {
        c.check(&format!("some complete allocation is {}", notion.name()), "false", exists(oracle, inst, notion));
    }
    c.check("dispatch", format!("refused ({})", inst.name().unwrap_or_default()), refusal(inst));
}

/// Whether agent 0 can gain by any single swap keeping both bundles feasible.
fn improving_swap(inst: &Instance, x: &Allocation) -> bool {
    let (a, b) = (x.bundle(0), x.bundle(1));
    let before = inst.value(0, a);
    a.iter().any(|&g| {
        b.iter().any(|&h| {
            let mut a2: Vec<Item> = a.iter().copied().filter(|&y| y != g).collect();
            a2.push(h);
            let mut b2: Vec<Item> = b.iter().copied().filter(|&y| y != h).collect();
            b2.push(g);
            inst.is_feasible_for(0, &a2) && inst.is_feasible_for(1, &b2) && inst.value(0, &a2) > before
        })
    })
}

impl Fixture {
    /// Re-derives every claim of this fixture.
    pub fn check(&self, oracle: &Oracle) -> FixtureOutcome {
        let mut c = Claims(Vec::new());
        let inst = &self.instance;
        let hl = self.highlighted.as_ref();
        let feasible = |x: &Allocation| check_feasible(x, inst).is_feasible();
        if let Some(x) = hl {
            c.check("highlighted allocation is feasible", "true", Ok(yes(feasible(x))));
        }
        match self.id {
            "table2-mnw" => {
                let x = hl.expect("table2 has a highlighted allocation");
                c.check("highlighted values", "[2, 3]", Ok(format!("{:?}", x.values(inst).iter().map(|v| v.to_integer()).collect::<Vec<_>>())));
                c.check("highlighted Nash product", "6", Ok(format_product(&nash_product(&x.values(inst)))));
                c.check("highlighted is F-EF1", "false", bool_of(fairness::is_fef1(x, inst)));
                let alt = alloc(&[&[0, 2, 4, 5, 6], &[1, 3, 7, 8, 9]]);
                c.check("(1,4) alternative is feasible", "true", Ok(yes(feasible(&alt))));
                c.check("(1,4) alternative is F-EF1", "true", bool_of(fairness::is_fef1(&alt, inst)));
                let value_pairs = (|| {
                    let mut set = BTreeSet::new();
                    oracle.for_each_feasible(inst, |y| {
                        let v = y.values(inst);
                        set.insert((v[0].to_integer(), v[1].to_integer()));
                        ControlFlow::Continue(())
                    })?;
                    Ok(format!("{set:?}"))
                })();
                c.check("feasible value pairs", "{(0, 5), (1, 4), (2, 3)}", value_pairs);
                let mnw = oracle.mnw(inst);
                c.check("maximum Nash product", "6", mnw.as_ref().map(|r| format_product(&r.product)).map_err(Clone::clone));
                c.check(
                    "highlighted is a maximum Nash welfare allocation",
                    "true",
                    mnw.as_ref().map(|r| yes(r.allocations.contains(x))).map_err(Clone::clone),
                );
                c.check(
                    "every maximum Nash welfare allocation fails F-EF1",
                    "true",
                    mnw.clone().and_then(|r| {
                        for y in &r.allocations {
                            if fairness::is_fef1(y, inst)? {
                                return Ok("false");
                            }
                        }
                        Ok("true")
                    }),
                );
                c.check("some complete allocation is F-EF1", "true", exists(oracle, inst, Notion::Fef1));
                c.check("maximum welfare", "5", oracle.swm(inst).map(|(w, _)| w));
                c.check(
                    "dispatch",
                    "iterated_priority_matching, F-EF1 true",
                    dispatch(inst, &SolveOptions::verified())
                        .and_then(|s| Ok(format!("{}, F-EF1 {}", s.algorithm, fairness::is_fef1(&s.allocation, inst)?))),
                );
            }
            "ex3.2-heterogeneous-categories" => {
                let x = hl.expect("ex3.2 has a highlighted allocation");
                c.check(
                    "feasible allocations",
                    format!("[{x:?}]"),
                    oracle.enumerate_feasible(inst).map(|v| format!("{v:?}")),
                );
                c.check("unique allocation is F-EF1", "false", bool_of(fairness::is_fef1(x, inst)));
                c.check("unique allocation is weakly F-EF1", "false", bool_of(fairness::is_weak_fef1(x, inst)));
                c.check("some complete allocation is F-EF1", "false", exists(oracle, inst, Notion::Fef1));
                c.check("dispatch", "refused (ex3.2-heterogeneous-categories)", refusal(inst));
            }
            "ex3.3-matching" => no_ef1_claims(&mut c, oracle, inst, "[(0, 3), (1, 2)]"),
            "ex3.4-conflict" => no_ef1_claims(&mut c, oracle, inst, "[(0, 2), (1, 3)]"),
            "ex3.5-budget" => {
                let x = hl.expect("ex3.5 has a highlighted allocation");
                c.check("feasible allocations", 2, oracle.count_feasible(inst));
                c.check("highlighted is EF1", "false", bool_of(fairness::is_ef1(x, inst)));
                no_ef1_claims(&mut c, oracle, inst, "[(0, 1)]");
            }
            "efx-uniform" => {
                c.check("feasible allocations", 6, oracle.count_feasible(inst));
                c.check("some complete allocation is EFX", "false", exists(oracle, inst, Notion::Efx));
                c.check("some complete allocation is F-EF1", "true", exists(oracle, inst, Notion::Fef1));
            }
            "k4-graphic" => {
                let x = hl.expect("k4 has a highlighted allocation");
                let m = inst.shared_matroid().expect("k4 is a shared matroid");
                c.check(
                    "feasible-exchange bijection between 12-23-34 and 13-14-24",
                    "none",
                    m.feasible_exchange_bijection(x.bundle(0), x.bundle(1))
                        .map(|b| b.map_or("none".to_string(), |p| format!("{p:?}"))),
                );
                c.check("base-orderable", "false", bool_of(m.is_base_orderable()));
                c.check("free extension base-orderable", "false", bool_of(m.free_extend(1).is_base_orderable()));
                c.check("highlighted values", "[1, 2]", Ok(format!("{:?}", x.values(inst).iter().map(|v| v.to_integer()).collect::<Vec<_>>())));
                c.check("first agent has an improving feasible swap", "false", Ok(yes(improving_swap(inst, x))));
                let double = k4_instance(2);
                let dx = k4_allocation(2);
                c.check("double copy: highlighted is EF1", "false", bool_of(fairness::is_ef1(&dx, &double)));
                c.check("double copy: first agent has an improving feasible swap", "false", Ok(yes(improving_swap(&double, &dx))));
                c.check(
                    "double copy: swaps from highlighted",
                    "not base-orderable",
                    match iterated_swaps_from(&double, &dx, &SolveOptions::default()) {
                        Err(Error::NotBaseOrderable { .. }) => Ok("not base-orderable".to_string()),
                        Err(e) => Err(e),
                        Ok(s) => Ok(format!("reached {:?}", s.allocation)),
                    },
                );
                c.check("double copy: some complete allocation is EF1", "true", exists(oracle, &double, Notion::Ef1));
            }
            "table3-weak-fef1" => {
                let x = hl.expect("table3 has a highlighted allocation");
                c.check("highlighted is weakly F-EF1", "true", bool_of(fairness::is_weak_fef1(x, inst)));
                c.check("highlighted is F-EF1", "false", bool_of(fairness::is_fef1(x, inst)));
            }
            "sec6.1-non-pe" => {
                let x = hl.expect("sec6.1 has a highlighted allocation");
                c.check(
                    "iterated priority matching output",
                    format!("{x:?}"),
                    iterated_priority_matching(inst, &SolveOptions::verified()).map(|s| format!("{:?}", s.allocation)),
                );
                c.check("highlighted is F-EF1", "true", bool_of(fairness::is_fef1(x, inst)));
                c.check(
                    "Pareto efficient",
                    "dominated",
                    is_pareto_efficient(x, inst).map(|v| match v {
                        ParetoVerdict::Dominated { .. } => "dominated",
                        ParetoVerdict::Efficient { .. } => "efficient",
                        ParetoVerdict::Unknown => "unknown",
                    }),
                );
                let better = alloc(&[&[2, 3], &[0, 1]]);
                c.check(
                    "dominating allocation values",
                    "[2, 2] vs [2, 1]",
                    Ok(format!(
                        "{:?} vs {:?}",
                        better.values(inst).iter().map(|v| v.to_integer()).collect::<Vec<_>>(),
                        x.values(inst).iter().map(|v| v.to_integer()).collect::<Vec<_>>()
                    )),
                );
                c.check("dispatch selection", "iterated_priority_matching", Ok(match select(inst) {
                    Selection::Run(a) => a.to_string(),
                    other => format!("{other:?}"),
                }));
            }
            _ => unreachable!("unknown fixture id"),
        }
        FixtureOutcome { id: self.id, claims: c.0 }
    }
}

/// Checks every fixture.
pub fn sweep(oracle: &Oracle) -> Vec<FixtureOutcome> {
    all().iter().map(|f| f.check(oracle)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_passes() {
        for outcome in sweep(&Oracle::default()) {
            for c in &outcome.claims {
                assert!(c.pass, "{}: {} expected {} observed {}", outcome.id, c.claim, c.expected, c.observed);
            }
        }
    }

    #[test]
    fn ids_are_unique_and_named() {
        for fx in all() {
            assert_eq!(fx.instance.name(), Some(fx.id));
        }
        assert_eq!(IDS.iter().collect::<BTreeSet<_>>().len(), IDS.len());
        assert!(get("nope").is_none());
    }
}
