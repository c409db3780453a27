mod common;

use proptest::prelude::*;

use common::polys::{self, Arg, ConsShape, Shape};
use wred::awfs::{free_factorization, has_rlp, verify_factorization, Engine, GenFamily, VerticalMap};
use wred::classical::{algebra_d, build_initial, build_wc, comparison_map, compute_c0, is_closed, ClosedSet};
use wred::fin::{Fam, Fin};
use wred::per::cover::TwoCoverBase;
use wred::per::{crosscheck, enumerate_terms, quotient, saturate};
use wred::poly::{check_algebra, enumerate_trees, eval_functor, Classification};
use wred::prescat::PshPolyRed;
use wred::presheaf::{check_hereditary, check_presheaf_laws, check_s, enumerate_n};
use wred::{Budget, Status};

fn shape(max_bases: usize, coherent: bool) -> impl Strategy<Value = Shape> {
    (1..=max_bases).prop_flat_map(move |bases| {
        let arg = (0..bases, 0..=2usize).prop_map(|(to, reds)| Arg { to, reds });
        let cons = (0..bases, prop::collection::vec(arg, 0..=2)).prop_map(move |(over, mut args)| {
            if coherent {
                for a in &mut args {
                    if a.to != over {
                        a.reds = 0;
                    }
                }
            }
            ConsShape { over, args }
        });
        prop::collection::vec(cons, 0..=2 * bases).prop_map(move |cons| Shape { bases, cons })
    })
}

fn small(depth: usize) -> Budget {
    Budget {
        max_depth: depth,
        max_count: 5_000,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normalization_keeps_coherence_and_is_idempotent(s in shape(3, false)) {
        let p = s.build();
        let n = p.normalize_reductions();
        prop_assert_eq!(n.check_coherence().passes(), p.check_coherence().passes());
        prop_assert_eq!(n.normalize_reductions(), n.clone());
        prop_assert!(n.is_normalized());
        prop_assert_eq!(n.classify(), p.classify());
    }

    #[test]
    fn coproduct_keeps_coherence(a in shape(2, true), b in shape(2, true)) {
        let b = Shape { bases: a.bases, cons: b.cons.into_iter().filter(|c| c.over < a.bases && c.args.iter().all(|x| x.to < a.bases)).collect() };
        let (p, q) = (a.build(), b.build());
        let sum = p.coprod(&q).unwrap();
        prop_assert!(sum.check_coherence().passes());
        prop_assert_eq!(sum.constructors().len(), p.constructors().len() + q.constructors().len());
        prop_assert_eq!(sum.classify(), p.classify().max(q.classify()));
    }

    #[test]
    fn functor_cardinality_without_reductions(s in shape(3, true), sizes in prop::collection::vec(0..=2usize, 3)) {
        let p = s.build().underlying();
        let w = Fam::new(s.bases, (0..s.bases).flat_map(|z| (0..sizes[z]).map(move |k| (format!("w{z}.{k}"), z)))).unwrap();
        let v = eval_functor(&p, &w).unwrap();
        for z in 0..s.bases {
            let cells: usize = s.cons.iter().filter(|c| c.over == z)
                .map(|c| c.args.iter().map(|a| sizes[a.to]).product::<usize>())
                .sum();
            prop_assert_eq!(v.value.fibre(z).len(), sizes[z] + cells);
        }
    }

    #[test]
    fn tree_levels_grow(s in shape(2, true), d in 0..4usize) {
        let p = s.build().underlying();
        let (a, b) = (enumerate_trees(&p, d).unwrap(), enumerate_trees(&p, d + 1).unwrap());
        for z in 0..s.bases {
            let names_b = b.render_fibre(z, &p);
            prop_assert!(a.render_fibre(z, &p).iter().all(|n| names_b.contains(n)));
        }
    }

    #[test]
    fn c0_is_least_among_closed_sets(s in shape(4, true)) {
        let p = s.build();
        let c0 = compute_c0(&p);
        prop_assert!(is_closed(&p, &c0));
        for mask in 0u32..(1 << s.bases) {
            let c = ClosedSet::from_indices(s.bases, (0..s.bases).filter(|z| mask & (1 << z) != 0));
            prop_assert_eq!(is_closed(&p, &c), polys::is_closed(&s, mask));
            if is_closed(&p, &c) {
                prop_assert!(c0.is_subset(&c));
            }
        }
    }

    #[test]
    fn classical_carrier_and_monotonicity(s in shape(2, true)) {
        let p = s.build().normalize_reductions();
        let c0 = compute_c0(&p);
        let wc = build_wc(&p, &c0, small(5)).unwrap();
        prop_assume!(wc.status() == Status::Finite);
        for z in c0.indices() {
            prop_assert_eq!(wc.carrier().fibre(z).len(), 1);
        }
        let d = algebra_d(&p, &wc).unwrap();
        prop_assert!(check_algebra(&p, &d, 1 << 20).unwrap().passes());
        for mask in 0u32..(1 << s.bases) {
            let c = ClosedSet::from_indices(s.bases, (0..s.bases).filter(|z| mask & (1 << z) != 0));
            if is_closed(&p, &c) {
                let to = build_wc(&p, &c, small(5)).unwrap();
                if to.status() == Status::Finite {
                    let m = comparison_map(&wc, &to).unwrap();
                    prop_assert!(m.iter().enumerate().all(|(e, &v)| to.carrier().over(v) == wc.carrier().over(e)));
                }
            }
        }
    }

    #[test]
    fn per_relation_is_symmetric_and_transitive(s in shape(2, true)) {
        let p = s.build().normalize_reductions();
        let cb = TwoCoverBase::for_poly(&p);
        let universe = enumerate_terms(&p, &cb, small(3)).unwrap();
        prop_assume!(universe.fibres.iter().map(Vec::len).sum::<usize>() <= 60);
        let rel = saturate(&p, &cb, universe);
        for fibre in &rel.universe.fibres {
            for &a in fibre {
                for &b in fibre {
                    prop_assert_eq!(rel.related(a, b), rel.related(b, a));
                    if rel.related(a, b) {
                        for &c in fibre {
                            if rel.related(b, c) {
                                prop_assert!(rel.related(a, c));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn per_quotient_is_an_algebra_and_matches_classical(s in shape(2, true)) {
        let p = s.build().normalize_reductions();
        let cb = TwoCoverBase::for_poly(&p);
        let q = quotient(&p, &cb, small(5)).unwrap();
        if let Some(alg) = &q.algebra {
            prop_assert!(check_algebra(&p, alg, 1 << 20).unwrap().passes());
            let init = build_initial(&p, small(5)).unwrap();
            if init.algebra.is_some() {
                prop_assert!(crosscheck(&p, &cb, small(5)).unwrap().passes());
            }
        }
    }

    #[test]
    fn presheaf_engine_on_the_trivial_category(s in shape(2, true)) {
        let p = s.build().normalize_reductions();
        prop_assume!(p.classify() != Classification::General);
        let pp = PshPolyRed::from_poly(&p).unwrap();
        let frag = enumerate_n(&pp, small(4)).unwrap();
        prop_assert!(check_presheaf_laws(&pp, &frag).passes());
        prop_assert!(check_hereditary(&pp, &frag).passes());
        if frag.status == Status::Finite {
            prop_assert!(check_s(&pp, &frag).passes());
            let init = build_initial(&p, small(4)).unwrap();
            prop_assert_eq!(init.wc.status(), Status::Finite);
            prop_assert_eq!(frag.len(), init.wc.len());
        }
    }

    #[test]
    fn free_factorizations_verify(seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut fam = |base: usize, max: usize, tag: &str| {
            let mut out = Vec::new();
            for b in 0..base {
                for _ in 0..rng.gen_range(0..=max) {
                    out.push((format!("{tag}{}", out.len()), b));
                }
            }
            Fam::new(base, out).unwrap()
        };
        let cod = fam(1, 2, "v");
        let dom = fam(cod.len(), 1, "u");
        let gen = GenFamily::new(Fin::new(["i"]).unwrap(), cod, dom).unwrap();
        let y = fam(2, 2, "y");
        let x = fam(y.len(), 1, "x");
        let f = VerticalMap::new(Fin::new(["j0", "j1"]).unwrap(), y, x).unwrap();
        let sq = gen.as_square();
        let fact = free_factorization(&sq, &f, small(4), Engine::Classical, None).unwrap();
        if fact.status == Status::Finite {
            prop_assert!(verify_factorization(&sq, &f, &fact).unwrap().passes());
            prop_assert!(has_rlp(&sq, &fact.as_vertical(&f), 100_000).unwrap().is_solved());
        }
    }
}
