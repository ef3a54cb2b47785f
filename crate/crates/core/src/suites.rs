//! Named verification suites shared by the command line tool and the
//! integration tests. Each suite runs a battery of exact checks and
//! reports pass and fail counts together with minimal witnesses.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeff::{AbelianLGroup, CoeffRing, GroupHom};
use crate::cohomology::chain::{oracle_corestrict, oracle_cup, oracle_restrict};
use crate::cohomology::{corestrict, restrict, torus_group, CohClass, CohRing};
use crate::error::Result;
use crate::iwahori::{
    central_embed, morita_check, spherical_compress, spherical_idempotent, theta_projector,
    InducedRep, IwahoriElement,
};
use crate::koszul::{
    binomial, ext_quotient_module, ext_self_algebra, freeness_generation_check, group_ring_ext,
    KoszulComplex,
};
use crate::laurent::LaurentElement;
use crate::linalg::Mat;
use crate::manifold::{
    exterior_generation_report, limit_assemble, ManifoldClass, Place, TorusManifold,
};
use crate::root_datum::RootDatum;
use crate::satake::{invariant_dims, satake_basis, SphericalElement, ToralElement};
use crate::tree::{oracle_model_comparison, splitness_check};

const WITNESS_CAP: usize = 64;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks_passed: u64,
    pub checks_failed: u64,
    pub witnesses: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            checks_passed: 0,
            checks_failed: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks_failed == 0
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.checks_passed += 1;
        } else {
            self.checks_failed += 1;
            if self.witnesses.len() < WITNESS_CAP {
                self.witnesses.push(witness());
            }
        }
    }

    fn absorb(&mut self, total_checks: usize, failures: &[String]) {
        self.checks_passed += (total_checks - failures.len()) as u64;
        self.checks_failed += failures.len() as u64;
        for w in failures {
            if self.witnesses.len() < WITNESS_CAP {
                self.witnesses.push(w.clone());
            }
        }
    }
}

/// Tree-oracle convolution against the toral model, plus the vanishing of
/// off-apartment transfers, for one (q, ell, r) regime.
pub fn satake_oracle_suite(q: u64, ell: u64, r: u32, depth: u32) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("satake-oracle");
    let window = depth.min(2);
    let comparison = oracle_model_comparison(q, ell, r, window)?;
    report.absorb(comparison.pairs_compared, &comparison.witness_failures);
    let split = splitness_check(q, ell, r, depth)?;
    report.absorb(split.classes_checked, &split.witness_failures);
    Ok(report)
}

/// Exterior self-Ext ranks, quotient-module freeness, minimal-degree
/// generation, and the group-ring change-of-rings comparison.
pub fn koszul_suite(max_rank: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("koszul");
    let ring = CoeffRing::new(3, 1)?;
    for rank in 0..=max_rank {
        let cx = KoszulComplex::new(ring, rank)?;
        let algebra = ext_self_algebra(&cx, rank)?;
        let expected: Vec<u64> = (0..=rank as u64)
            .map(|i| binomial(rank as u64, i))
            .collect();
        report.record(algebra.ranks == expected, || {
            format!(
                "rank {rank} self-Ext ranks {:?}, expected {expected:?}",
                algebra.ranks
            )
        });
        report.record(algebra.anticommutative, || {
            format!(
                "rank {rank} products fail anticommutativity: {:?}",
                algebra.witness_failures
            )
        });
    }
    let cx3 = KoszulComplex::new(ring, 3)?;
    let quotient = ext_quotient_module(&cx3, &[2], 3)?;
    report.record(
        quotient.ranks == vec![1, 1, 0, 0]
            && quotient.annihilator_respected
            && quotient.free_through_quotient,
        || format!("quotient module report {quotient:?}"),
    );
    let over_nine = CoeffRing::new(3, 2)?;
    let cx_nine = KoszulComplex::new(over_nine, 2)?;
    let quotient_nine = ext_quotient_module(&cx_nine, &[0, 1], 2)?;
    report.record(
        quotient_nine.ranks == vec![1, 2, 1] && quotient_nine.free_through_quotient,
        || format!("full quotient over Z/9 report {quotient_nine:?}"),
    );
    for (rank, delta) in [(2usize, 1usize), (3, 1), (3, 2)] {
        let cx = KoszulComplex::new(ring, rank)?;
        let freeness = freeness_generation_check(&cx, delta, delta)?;
        let expected: Vec<u64> = (0..=delta as u64)
            .map(|q| binomial(delta as u64, q))
            .collect();
        report.record(
            freeness.surjective && freeness.ranks[..=delta] == expected,
            || format!("generation check ({rank},{delta}) report {freeness:?}"),
        );
    }
    for (n, big_n, rank) in [
        (1u32, 1u32, 1usize),
        (1, 2, 1),
        (2, 2, 1),
        (1, 1, 2),
        (2, 2, 2),
    ] {
        let group_ring = group_ring_ext(3, n, big_n, rank, 3)?;
        report.record(
            group_ring.rank_match
                && group_ring.surjective
                && group_ring.conormal_factor_logs == vec![n; rank],
            || format!("group ring (n={n}, N={big_n}, R={rank}) report {group_ring:?}"),
        );
    }
    Ok(report)
}

/// Structure constants of the Iwahori model at q = 1: involutions, the
/// spherical idempotent, the center, induced-representation matrices, the
/// Morita rank table, the interpolation projector, and compression of the
/// projected generator down to the spherical model.
pub fn iwahori_suite() -> Result<SuiteReport> {
    let mut report = SuiteReport::new("iwahori");
    let probe = CoeffRing::new(5, 1)?;
    for name in ["SL2", "PGL2", "SL3", "Sp4"] {
        let rd = RootDatum::catalog(name)?;
        let one = IwahoriElement::one(&rd, probe);
        for i in 0..rd.simple.len() {
            let s = rd.weyl_from_word(&[i])?;
            let ts = IwahoriElement::from_weyl(&rd, probe, s);
            report.record(ts.multiply(&ts)?.sub(&one)?.is_zero(), || {
                format!("{name} reflection {i} does not square to one")
            });
        }
    }
    let rd = RootDatum::catalog("PGL2")?;
    for modulus in [3u64, 7] {
        let field = CoeffRing::new(modulus, 1)?;
        let ek = spherical_idempotent(&rd, field)?;
        report.record(ek.multiply(&ek)?.sub(&ek)?.is_zero(), || {
            format!("spherical idempotent fails mod {modulus}")
        });
    }
    let field = CoeffRing::new(7, 1)?;
    let mut symmetric = LaurentElement::zero(field, 1);
    symmetric.insert(vec![1], 1);
    symmetric.insert(vec![-1], 1);
    symmetric.insert(vec![0], 3);
    let central = central_embed(&rd, field, &symmetric)?;
    for lambda in -3i64..=3 {
        for w in rd.weyl_elements() {
            let mut d = IwahoriElement::zero(&rd, field);
            d.insert(vec![lambda], w, 1);
            report.record(
                central.multiply(&d)?.sub(&d.multiply(&central)?)?.is_zero(),
                || format!("center fails against translation {lambda}"),
            );
        }
    }
    let rep = InducedRep::new(&rd, field, &[2])?;
    let t_mu = rep.basis_matrix(&[1], rd.weyl_identity())?;
    let expected_t = Mat::from_rows(field, &[vec![2, 0], vec![0, 4]]);
    report.record(t_mu == expected_t, || {
        "translation matrix is not diag(2,4)".into()
    });
    let s = rd.weyl_from_word(&[0])?;
    let p_s = rep.basis_matrix(&[0], s)?;
    let expected_s = Mat::from_rows(field, &[vec![0, 1], vec![1, 0]]);
    report.record(p_s == expected_s, || {
        "reflection matrix is not the swap".into()
    });
    let ek_matrix = rep.matrix_of(&spherical_idempotent(&rd, field)?)?;
    report.record(ek_matrix.rank_mod_ell() == 1, || {
        format!("idempotent image rank {}", ek_matrix.rank_mod_ell())
    });
    let morita = morita_check(&rd, field, &[2], 2)?;
    report.record(
        morita.applicable
            && morita.endo_rank == 4
            && morita.hom_ik_rank == 2
            && morita.hom_ki_rank == 2
            && morita.kk_rank == 1,
        || format!("regular character Morita report {morita:?}"),
    );
    let degenerate = morita_check(&rd, field, &[1], 2)?;
    report.record(
        !degenerate.applicable && degenerate.reason.is_some(),
        || "fixed character was not flagged".into(),
    );
    let theta = theta_projector(&rd, &field, &[2])?;
    report.record(theta.coeff(&[1]) == 3 && theta.coeff(&[0]) == 2, || {
        format!("projector coefficients {:?}", theta)
    });
    report.record(
        theta.eval_character(&[2])? == 1 && theta.eval_character(&[4])? == 0,
        || "projector interpolation values are wrong".into(),
    );
    let torus = CohRing::new(AbelianLGroup::cyclic(7, 1)?, field)?;
    let x = torus.x(0);
    let compressed = spherical_compress(&rd, &theta, &x)?;
    report.record(
        compressed.inner().value(&[1]) == x.scale(3)
            && compressed.inner().value(&[-1]) == x.scale(4)
            && compressed.inner().support_radius() <= 3,
        || "compressed generator has the wrong toral values".into(),
    );
    Ok(report)
}

fn identity_place(label: &str, ell: u64, exponent: u32, delta: usize) -> Result<Place> {
    let mut matrix = vec![vec![0i64; delta]; delta];
    for (i, row) in matrix.iter_mut().enumerate() {
        row[i] = 1;
    }
    Ok(Place {
        label: label.to_string(),
        target: AbelianLGroup::new(ell, vec![exponent; delta])?,
        matrix,
    })
}

/// Exterior generation for small ranks, coefficient-change intertwining,
/// and limit assembly of compatible endomorphism families.
pub fn manifold_suite() -> Result<SuiteReport> {
    let mut report = SuiteReport::new("manifold");
    for delta in 1usize..=3 {
        let m = TorusManifold::new(delta, vec![identity_place("v", 3, 2, delta)?])?;
        let choices: Vec<(String, Vec<u64>)> = (0..delta)
            .map(|i| {
                let mut alpha = vec![0u64; delta];
                alpha[i] = 1;
                ("v".to_string(), alpha)
            })
            .collect();
        let generation = exterior_generation_report(&m, CoeffRing::new(3, 2)?, &choices)?;
        let expected: Vec<u64> = (0..=delta as u64)
            .map(|k| binomial(delta as u64, k))
            .collect();
        report.record(
            generation.freely_generated
                && generation.ranks == expected
                && generation.total_rank == 1 << delta,
            || format!("delta={delta} generation report {generation:?}"),
        );
    }
    let m = TorusManifold::new(2, vec![identity_place("v", 3, 3, 2)?])?;
    let deficient = exterior_generation_report(
        &m,
        CoeffRing::new(3, 1)?,
        &[("v".into(), vec![1, 2]), ("v".into(), vec![2, 4])],
    );
    report.record(
        matches!(&deficient, Ok(rep) if !rep.freely_generated && !rep.witness_failures.is_empty()),
        || "deficient span was not flagged".into(),
    );
    let big = CoeffRing::new(3, 2)?;
    let small = CoeffRing::new(3, 1)?;
    let a = ManifoldClass::character(big, &[1, 5]);
    let b = ManifoldClass::character(big, &[2, 7]);
    let reduced = a.wedge(&b)?.coeff_change(small)?;
    let direct = a.coeff_change(small)?.wedge(&b.coeff_change(small)?)?;
    report.record(reduced == direct, || {
        "coefficient change fails to intertwine".into()
    });
    let tower = TorusManifold::new(2, vec![identity_place("v", 3, 4, 2)?])?;
    let levels: Vec<Mat> = (1..=4u32)
        .map(|n| {
            let s = CoeffRing::new(3, n)?;
            tower.action_matrix(s, "v", &[s.reduce_u64(27), s.reduce_u64(9)])
        })
        .collect::<Result<_>>()?;
    let assembled = limit_assemble(3, 2, &levels)?;
    report.record(
        assembled == tower.action_matrix(CoeffRing::new(3, 4)?, "v", &[27, 9])?,
        || "limit assembly disagrees with the direct action".into(),
    );
    for n in 0..levels.len() {
        let reduced = Mat::from_rows(
            levels[n].ring,
            &(0..assembled.rows)
                .map(|i| {
                    (0..assembled.cols)
                        .map(|j| levels[n].ring.reduce_u64(assembled.get(i, j)))
                        .collect()
                })
                .collect::<Vec<_>>(),
        );
        report.record(reduced == levels[n], || {
            format!("assembled limit does not restrict to level {}", n + 1)
        });
    }
    let mut broken = vec![Mat::identity(small, 4), Mat::identity(big, 4)];
    broken[1].set(1, 1, 5);
    report.record(
        matches!(
            limit_assemble(3, 2, &broken),
            Err(crate::error::Error::BrokenSquare { level: 1, .. })
        ),
        || "broken compatibility square was not detected".into(),
    );
    Ok(report)
}

fn exponent_shapes() -> Vec<Vec<u32>> {
    vec![
        vec![],
        vec![1],
        vec![2],
        vec![1, 1],
        vec![1, 2],
        vec![2, 1],
        vec![2, 2],
    ]
}

fn basis_through_degree(ring: &CohRing, max_degree: usize) -> Vec<CohClass> {
    let mut out = Vec::new();
    for degree in 0..=max_degree {
        out.extend(ring.basis_classes(degree));
    }
    out
}

/// Closed-form cup, restriction, and corestriction against the honest
/// periodic-resolution computations, exhaustively over groups with at most
/// two cyclic factors of order at most 9 and coefficients Z/3 and Z/9,
/// through total degree 4, together with the transfer identities.
pub fn engine_suite() -> Result<SuiteReport> {
    let mut report = SuiteReport::new("engine");
    let ell = 3u64;
    for shape in exponent_shapes() {
        let group = AbelianLGroup::new(ell, shape.clone())?;
        let max_r = shape.iter().copied().min().unwrap_or(2).min(2);
        for r in 1..=max_r {
            let ring = CohRing::new(group.clone(), CoeffRing::new(ell, r)?)?;
            for i in 0..=4usize {
                for j in 0..=(4 - i) {
                    for a in ring.basis_classes(i) {
                        for b in ring.basis_classes(j) {
                            let closed = a.cup(&b)?;
                            let honest = oracle_cup(&a, &b)?;
                            report.record(closed == honest, || {
                                format!(
                                    "cup mismatch over {group} mod {ell}^{r} at degrees ({i},{j})"
                                )
                            });
                        }
                    }
                }
            }
        }
    }

    let cyclic_shapes: Vec<Vec<u32>> = vec![vec![], vec![1], vec![2]];
    for source_shape in &cyclic_shapes {
        for target_shape in &cyclic_shapes {
            let source = AbelianLGroup::new(ell, source_shape.clone())?;
            let target = AbelianLGroup::new(ell, target_shape.clone())?;
            let entries: Vec<Vec<Vec<i64>>> = if target_shape.is_empty() {
                vec![Vec::new()]
            } else {
                let order = ell.pow(target_shape[0]);
                (0..order)
                    .map(|e| vec![(0..source_shape.len()).map(|_| e as i64).collect()])
                    .collect()
            };
            for matrix in entries {
                let Ok(hom) = GroupHom::new(source.clone(), target.clone(), &matrix) else {
                    continue;
                };
                let min_exp = source_shape
                    .iter()
                    .chain(target_shape.iter())
                    .copied()
                    .min()
                    .unwrap_or(2);
                for r in 1..=min_exp.min(2) {
                    let coeff = CoeffRing::new(ell, r)?;
                    let target_ring = CohRing::new(target.clone(), coeff)?;
                    for a in basis_through_degree(&target_ring, 4) {
                        let closed = restrict(&hom, &a)?;
                        let honest = oracle_restrict(&hom, &a)?;
                        report.record(closed == honest, || {
                            format!("restriction mismatch along {:?} from {target}", matrix)
                        });
                    }
                }
            }
        }
    }

    let curated: Vec<(Vec<u32>, Vec<u32>, Vec<Vec<i64>>)> = vec![
        (vec![1, 1], vec![1, 1], vec![vec![1, 0], vec![0, 1]]),
        (vec![1, 1], vec![1, 1], vec![vec![0, 1], vec![1, 0]]),
        (vec![1, 1], vec![1, 1], vec![vec![1, 1], vec![0, 1]]),
        (vec![1, 1], vec![1, 1], vec![vec![2, 0], vec![0, 1]]),
        (vec![2, 2], vec![2, 2], vec![vec![1, 1], vec![0, 1]]),
        (vec![2, 2], vec![2, 2], vec![vec![0, 1], vec![1, 0]]),
        (vec![2, 2], vec![1, 1], vec![vec![1, 2], vec![1, 1]]),
        (vec![1], vec![1, 1], vec![vec![1], vec![1]]),
        (vec![1, 1], vec![1], vec![vec![1, 2]]),
        (vec![1, 1], vec![2, 2], vec![vec![3, 0], vec![3, 3]]),
        (vec![2], vec![2, 2], vec![vec![1], vec![3]]),
        (vec![1, 2], vec![2, 1], vec![vec![3, 0], vec![0, 1]]),
    ];
    for (source_shape, target_shape, matrix) in curated {
        let source = AbelianLGroup::new(ell, source_shape.clone())?;
        let target = AbelianLGroup::new(ell, target_shape.clone())?;
        let Ok(hom) = GroupHom::new(source, target, &matrix) else {
            continue;
        };
        let min_exp = source_shape
            .iter()
            .chain(target_shape.iter())
            .copied()
            .min()
            .unwrap_or(2);
        for r in 1..=min_exp.min(2) {
            let coeff = CoeffRing::new(ell, r)?;
            let target_ring = CohRing::new(hom.target.clone(), coeff)?;
            for a in basis_through_degree(&target_ring, 4) {
                let closed = restrict(&hom, &a)?;
                let honest = oracle_restrict(&hom, &a)?;
                report.record(closed == honest, || {
                    format!("restriction mismatch along {matrix:?} from {}", hom.target)
                });
            }
        }
    }

    let inclusions: Vec<(Vec<u32>, Vec<u32>, Vec<Vec<i64>>)> = vec![
        (vec![], vec![1], vec![vec![]]),
        (vec![], vec![2], vec![vec![]]),
        (vec![], vec![1, 1], vec![vec![], vec![]]),
        (vec![], vec![2, 2], vec![vec![], vec![]]),
        (vec![1], vec![2], vec![vec![3]]),
        (vec![1], vec![1, 1], vec![vec![1], vec![0]]),
        (vec![1], vec![1, 1], vec![vec![1], vec![1]]),
        (vec![1], vec![2, 1], vec![vec![3], vec![1]]),
        (vec![2], vec![2, 2], vec![vec![1], vec![0]]),
        (vec![1, 1], vec![2, 2], vec![vec![3, 0], vec![0, 3]]),
        (vec![1, 1], vec![2, 1], vec![vec![3, 0], vec![0, 1]]),
        (vec![1, 1], vec![1, 1], vec![vec![1, 0], vec![0, 1]]),
        (vec![2], vec![2, 1], vec![vec![1], vec![0]]),
    ];
    for (source_shape, target_shape, matrix) in inclusions {
        let source = AbelianLGroup::new(ell, source_shape.clone())?;
        let target = AbelianLGroup::new(ell, target_shape.clone())?;
        let hom = GroupHom::new(source, target, &matrix)?;
        let index = hom.image_index();
        let min_exp = source_shape
            .iter()
            .chain(target_shape.iter())
            .copied()
            .min()
            .unwrap_or(2);
        for r in 1..=min_exp.min(2) {
            let coeff = CoeffRing::new(ell, r)?;
            let source_ring = CohRing::new(hom.source.clone(), coeff)?;
            let target_ring = CohRing::new(hom.target.clone(), coeff)?;
            for a in basis_through_degree(&source_ring, 4) {
                let homotopy = corestrict(&hom, &a)?;
                let solver = oracle_corestrict(&hom, &a)?;
                report.record(homotopy == solver, || {
                    format!(
                        "transfer modes disagree along {matrix:?} into {}",
                        hom.target
                    )
                });
            }
            for b in basis_through_degree(&target_ring, 4) {
                let round_trip = corestrict(&hom, &restrict(&hom, &b)?)?;
                report.record(round_trip == b.scale(index), || {
                    format!(
                        "Cores(Res) is not multiplication by {index} along {matrix:?} into {}",
                        hom.target
                    )
                });
            }
            for a in basis_through_degree(&target_ring, 2) {
                for b in basis_through_degree(&source_ring, 2) {
                    let pushed = corestrict(&hom, &restrict(&hom, &a)?.cup(&b)?)?;
                    let pulled = a.cup(&corestrict(&hom, &b)?)?;
                    report.record(pushed == pulled, || {
                        format!(
                            "projection formula fails along {matrix:?} into {}",
                            hom.target
                        )
                    });
                }
            }
            if hom.source.order() == 1 && target_ring.ring.reduce_u64(index) == 0 {
                let transferred = corestrict(&hom, &source_ring.one())?;
                report.record(transferred.is_zero(), || {
                    format!(
                        "transfer from the trivial subgroup of {} is nonzero",
                        hom.target
                    )
                });
            }
        }
    }
    Ok(report)
}

fn random_class(ring: &CohRing, rng: &mut ChaCha8Rng, degree: usize) -> Result<CohClass> {
    let basis = ring.basis_classes(degree);
    let mut out = ring.zero();
    for b in &basis {
        out = out.add(&b.scale(rng.gen_range(0..ring.ring.modulus)))?;
    }
    if out.is_zero() {
        if let Some(first) = basis.first() {
            out = out.add(first)?;
        }
    }
    Ok(out)
}

fn random_regular_orbit(
    rd: &RootDatum,
    ring: &CohRing,
    rng: &mut ChaCha8Rng,
    radius: i64,
    degree: usize,
) -> Result<SphericalElement> {
    for _ in 0..10_000 {
        let cand: Vec<i64> = (0..rd.rank)
            .map(|_| rng.gen_range(-radius..=radius))
            .collect();
        let (dominant, _) = rd.dominant_representative(&cand);
        if rd.stabilizer(&dominant).len() != 1 {
            continue;
        }
        if rd
            .orbit(&dominant)
            .iter()
            .any(|p| p.iter().any(|c| c.abs() > radius))
        {
            continue;
        }
        let alpha = random_class(ring, rng, degree)?;
        return satake_basis(rd, ring, &dominant, &alpha);
    }
    unreachable!("every catalog datum has a regular coweight of sup-norm at most 2")
}

fn random_spherical(
    rd: &RootDatum,
    ring: &CohRing,
    rng: &mut ChaCha8Rng,
    radius: i64,
    degree: usize,
) -> Result<SphericalElement> {
    let mut acc = SphericalElement::new(ToralElement::zero(rd, ring)?)?;
    for _ in 0..=rng.gen_range(0..2u32) {
        acc = acc.add(&random_regular_orbit(rd, ring, rng, radius, degree)?)?;
    }
    Ok(acc)
}

/// Graded commutativity of the spherical convolution on random homogeneous
/// pairs, for every catalog root datum.
pub fn commutativity_suite(seed: u64, pairs_per_datum: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("commutativity");
    for (index, name) in ["SL2", "PGL2", "SL3", "Sp4"].iter().enumerate() {
        let rd = RootDatum::catalog(name)?;
        let group = torus_group(&rd, 3, 2)?;
        let ring = CohRing::new(group, CoeffRing::new(3, 2)?)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
        for _ in 0..pairs_per_datum {
            let da = rng.gen_range(0..=2usize);
            let db = rng.gen_range(0..=2usize);
            let a = random_spherical(&rd, &ring, &mut rng, 2, da)?;
            let b = random_spherical(&rd, &ring, &mut rng, 2, db)?;
            let ab = a.multiply(&b)?;
            let ba = b.multiply(&a)?;
            let expected = if da % 2 == 1 && db % 2 == 1 {
                ba.inner().neg()
            } else {
                ba.inner().clone()
            };
            report.record(ab.inner().sub(&expected)?.is_zero(), || {
                format!("{name}: degrees ({da},{db}) pair fails graded commutativity")
            });
        }
    }
    Ok(report)
}

/// The invariant-dimension table for the rank-one catalog datum, matching
/// the symmetric-algebra presentation counts.
pub fn presentation_suite() -> Result<SuiteReport> {
    let mut report = SuiteReport::new("presentation");
    let rd = RootDatum::catalog("PGL2")?;
    let ring = CohRing::new(torus_group(&rd, 3, 1)?, CoeffRing::new(3, 1)?)?;
    for n in 2i64..=4 {
        let dims = invariant_dims(&rd, &ring, n, 2)?;
        let expected = [n as u64 + 1, n as u64, n as u64];
        let got = [dims.total(0), dims.total(1), dims.total(2)];
        report.record(got == expected, || {
            format!("support {n} invariant dimensions {got:?}, expected {expected:?}")
        });
    }
    Ok(report)
}
