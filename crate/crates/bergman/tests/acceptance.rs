//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the observed worst-case numbers when it completes.
//!
//! Every tolerance is pinned in the assertions below; seeds are fixed so
//! each run exercises the identical corpus.

use bergman::classify::{
    classify_ca, classify_cstar, classify_hermitian, classify_ucstaru, classify_unitary,
    comp_adjoint, comp_op_properties, draws, find_symmetry, symmetry_obstruction, FamilyTag,
    Obstruction, SymmetryCertificate,
};
use bergman::kernel::{bergman_norm, inner_product, kernel_eval, kernel_norm_sq, span_residual};
use bergman::lebesgue::{
    kernel_preimage, laplace_closed, lebesgue_norm_sq, lebesgue_norm_sq_numeric, pullback_wco,
};
use bergman::maps::{
    denjoy_wolff, grid_falsifier, self_map_check, SelfMapBranch,
};
use bergman::operators::{
    conjugate, wco_adjoint_apply, wco_adjoint_on_kernel, wco_apply, ConjugationSpec,
};
use bergman::quadrature::{
    operator_norm_estimate, quad_span_inner_product, verify_identity, QuadratureConfig,
};
use bergman::sampling::CounterRng;
use bergman::types::{
    HalfPlanePoint, KernelSpan, KernelTerm, MapSymbol, MoebiusMap, SymbolPair, WeightIndex,
    WeightSymbol,
};
use bergman::{Complex64, EPS_PARAM};

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Exact residual of `C W* C K_z = W K_z` over `n` seeded kernel points.
fn conjugation_residual(s: &SymbolPair, spec: &ConjugationSpec, n: usize, rng: &mut CounterRng) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let z = rng.halfplane_point();
        let k = KernelSpan::kernel(s.ell, z);
        let lhs = conjugate(
            spec,
            &wco_adjoint_apply(s, &conjugate(spec, &k))
                .expect("adjoint acts on kernels")
                .result,
        );
        let rhs = wco_apply(s, &k).expect("family pairs are kernel compatible").result;
        worst = worst.max(span_residual(&lhs, &rhs));
    }
    worst
}

/// Exact residual of `W* K_z = W K_z` over `n` seeded kernel points.
fn hermitian_residual(s: &SymbolPair, n: usize, rng: &mut CounterRng) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let z = rng.halfplane_point();
        let adj = wco_adjoint_on_kernel(s, z).expect("adjoint acts on kernels").result;
        let img = wco_apply(s, &KernelSpan::kernel(s.ell, z))
            .expect("family pairs are kernel compatible")
            .result;
        worst = worst.max(span_residual(&adj, &img));
    }
    worst
}

#[test]
fn criterion_1_reproducing_and_norms() {
    let cfg = QuadratureConfig {
        rel_tol: 1e-7,
        abs_floor: 1e-12,
        ..QuadratureConfig::default()
    };
    let mut rng = CounterRng::new(1001);
    let mut worst_pair = 0.0f64;
    let mut worst_norm = 0.0f64;
    for ell in [0u32, 1, 2] {
        let ell = WeightIndex(ell);
        for _ in 0..20 {
            let z = rng.halfplane_point();
            let w = rng.halfplane_point();
            // Quadrature <K_z, K_w> matches K_z(w) within 1e-6 relative.
            let kz = KernelSpan::kernel(ell, z);
            let kw = KernelSpan::kernel(ell, w);
            let quad = quad_span_inner_product(&kz, &kw, &cfg).expect("quadrature converges");
            let exact = kernel_eval(ell, z, w);
            let rel = (quad.value - exact).norm() / exact.norm();
            worst_pair = worst_pair.max(rel);
            assert!(rel <= 1e-6, "ell={} z={:?} w={:?} rel={rel}", ell.0, z, w);
            // ||K_z||^2 against the closed form: exactly via the span inner
            // product, within 1e-6 via quadrature.
            let closed = kernel_norm_sq(ell, z);
            let span_ip = inner_product(&kz, &kz).unwrap();
            assert!((span_ip.re - closed).abs() <= 1e-14 * closed);
            assert!(span_ip.im.abs() <= 1e-14 * closed);
            let quad_norm = quad_span_inner_product(&kz, &kz, &cfg).unwrap();
            let rel = (quad_norm.value.re - closed).abs() / closed;
            worst_norm = worst_norm.max(rel);
            assert!(rel <= 1e-6);
        }
    }
    println!(
        "ACCEPTANCE criterion-1 PASS: reproducing/norm suite, worst pair residual {worst_pair:.2e}, worst norm residual {worst_norm:.2e}"
    );
}

fn hermitian_draw(case: u8, ell: WeightIndex, rng: &mut CounterRng) -> SymbolPair {
    match case {
        1 => draws::hermitian_i(ell, rng),
        2 => draws::hermitian_ii(ell, rng),
        _ => draws::hermitian_iii(ell, rng),
    }
}

/// Breaks exactly one condition of a hermitian family pair.
fn hermitian_negative(case: u8, ell: WeightIndex, rng: &mut CounterRng) -> SymbolPair {
    let s = hermitian_draw(case, ell, rng);
    let kind = rng.next_u64() % 2;
    match (case, s.f, &s.g) {
        // Case I: make ε non-real, or detach the pole from conj(μ).
        (1, WeightSymbol::ReciprocalPower { c, a, b }, g) => {
            if kind == 0 {
                SymbolPair::new(
                    ell,
                    WeightSymbol::reciprocal_power(c * c64(1.0, 0.6), a, b).unwrap(),
                    *g,
                )
            } else {
                SymbolPair::new(
                    ell,
                    WeightSymbol::reciprocal_power(c, a, b + a * c64(0.4, 0.0)).unwrap(),
                    *g,
                )
            }
        }
        // Case II: λ ← λ + i, or tilt the slope away from 1.
        (2, WeightSymbol::Constant(lambda), MapSymbol::Moebius(_)) => {
            if kind == 0 {
                SymbolPair::new(ell, WeightSymbol::constant(lambda + c64(0.0, 1.0)), s.g)
            } else {
                SymbolPair::new(
                    ell,
                    WeightSymbol::constant(lambda),
                    MapSymbol::Moebius(
                        MoebiusMap::affine(c64(1.2, 0.0), c64(0.5, 0.0)).unwrap(),
                    ),
                )
            }
        }
        // Case III: make δ non-real, or break u = conj(p).
        (_, WeightSymbol::ReciprocalPower { c, a, b }, MapSymbol::Moebius(m)) => {
            if kind == 0 {
                SymbolPair::new(
                    ell,
                    WeightSymbol::reciprocal_power(c * c64(1.0, 0.7), a, b).unwrap(),
                    s.g,
                )
            } else {
                let sf = m.special_form().unwrap();
                SymbolPair::new(
                    ell,
                    WeightSymbol::ReciprocalPower { c, a, b },
                    MapSymbol::Moebius(
                        MoebiusMap::special(sf.p, sf.q, sf.u - c64(0.3, 0.0)).unwrap(),
                    ),
                )
            }
        }
        _ => unreachable!("draws produce the expected shapes"),
    }
}

#[test]
fn criterion_2_hermitian_suite() {
    let cfg = QuadratureConfig::default();
    let mut rng = CounterRng::new(2002);
    let mut worst_exact = 0.0f64;
    let mut worst_quad = 0.0f64;
    for case in [1u8, 2, 3] {
        let expect = match case {
            1 => FamilyTag::HermitianI,
            2 => FamilyTag::HermitianII,
            _ => FamilyTag::HermitianIII,
        };
        for draw in 0..200 {
            let ell = WeightIndex((rng.next_u64() % 3) as u32);
            let s = hermitian_draw(case, ell, &mut rng);
            let report = classify_hermitian(&s);
            assert_eq!(report.family, expect, "draw {draw} case {case}: {report:?}");
            assert!(report.bounded);
            // Exact identity on kernels over 20 points.
            let res = hermitian_residual(&s, 20, &mut rng);
            worst_exact = worst_exact.max(res);
            assert!(res <= 1e-12, "case {case} draw {draw}: exact residual {res}");
            // Quadrature residual on one sampled kernel point.
            let z = rng.halfplane_point();
            let adj = wco_adjoint_on_kernel(&s, z).unwrap().result;
            let img = wco_apply(&s, &KernelSpan::kernel(ell, z)).unwrap().result;
            let report = verify_identity(&adj, &img, &cfg).expect("quadrature converges");
            worst_quad = worst_quad.max(report.quad_residual);
            assert!(
                report.quad_residual <= 1e-6,
                "case {case} draw {draw}: quad residual {}",
                report.quad_residual
            );
        }
    }
    // 200 perturbed negative controls, one broken condition each.
    let mut rng = CounterRng::new(2202);
    for i in 0..200 {
        let case = (i % 3 + 1) as u8;
        let ell = WeightIndex((rng.next_u64() % 3) as u32);
        let bad = hermitian_negative(case, ell, &mut rng);
        let report = classify_hermitian(&bad);
        assert!(
            !report.is_positive(),
            "negative control {i} (case {case}) accepted: {report:?}"
        );
    }
    println!(
        "ACCEPTANCE criterion-2 PASS: hermitian suite, worst exact residual {worst_exact:.2e}, worst quadrature residual {worst_quad:.2e}, 200 negative controls rejected"
    );
}

#[test]
fn criterion_3_unitary_suite() {
    let mut rng = CounterRng::new(3003);
    let mut worst = 0.0f64;
    let mut worst_ip = 0.0f64;
    for form in [1u8, 2] {
        for draw in 0..100 {
            let ell = WeightIndex((rng.next_u64() % 3) as u32);
            let s = if form == 1 {
                draws::unitary_i(ell, &mut rng)
            } else {
                draws::unitary_ii(ell, &mut rng)
            };
            let report = classify_unitary(&s);
            let expect = if form == 1 { FamilyTag::UnitaryI } else { FamilyTag::UnitaryII };
            assert_eq!(report.family, expect, "form {form} draw {draw}: {report:?}");
            // W W* K_z = W* W K_z = K_z exactly.
            for _ in 0..20 {
                let z = rng.halfplane_point();
                let k = KernelSpan::kernel(ell, z);
                let wstar_k = wco_adjoint_apply(&s, &k).unwrap().result;
                let ww_star = wco_apply(&s, &wstar_k).unwrap().result;
                let w_k = wco_apply(&s, &k).unwrap().result;
                let wstar_w = wco_adjoint_apply(&s, &w_k).unwrap().result;
                let r1 = span_residual(&ww_star, &k);
                let r2 = span_residual(&wstar_w, &k);
                worst = worst.max(r1).max(r2);
                assert!(r1 <= 1e-12 && r2 <= 1e-12, "form {form}: {r1} {r2}");
            }
            // Inner products preserved on random 4-term spans.
            let h1 = rng.span(ell, 4);
            let h2 = rng.span(ell, 4);
            let lhs = inner_product(
                &wco_apply(&s, &h1).unwrap().result,
                &wco_apply(&s, &h2).unwrap().result,
            )
            .unwrap();
            let rhs = inner_product(&h1, &h2).unwrap();
            let rel = (lhs - rhs).norm() / rhs.norm().max(1e-30);
            worst_ip = worst_ip.max(rel);
            assert!(rel <= 1e-12, "form {form} draw {draw}: inner product drift {rel}");
            // Norm estimate equals 1 for a subsample.
            if draw % 10 == 0 {
                let est = operator_norm_estimate(&s, 8, rng.next_u64()).unwrap();
                assert!((est - 1.0).abs() <= 1e-10, "form {form}: estimate {est}");
            }
        }
    }
    println!(
        "ACCEPTANCE criterion-3 PASS: unitary suite, worst kernel residual {worst:.2e}, worst span inner-product drift {worst_ip:.2e}, norm estimates at 1"
    );
}

#[test]
fn criterion_4_conjugation_families() {
    let mut rng = CounterRng::new(4004);
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for family in 0..3u8 {
        for case in [1u8, 2, 3] {
            for _draw in 0..100 {
                let ell = WeightIndex((rng.next_u64() % 3) as u32);
                let (s, spec) = match family {
                    0 => {
                        let a = rng.uniform(-2.0, 2.0);
                        let s = match case {
                            1 => draws::ca_i(ell, a, &mut rng),
                            2 => draws::ca_ii(ell, a, &mut rng),
                            _ => draws::ca_iii(ell, a, &mut rng),
                        };
                        (s, ConjugationSpec::Ca { a })
                    }
                    1 => {
                        let s = match case {
                            1 => draws::cstar_i(ell, &mut rng),
                            2 => draws::cstar_ii(ell, &mut rng),
                            _ => draws::cstar_iii(ell, &mut rng),
                        };
                        (s, ConjugationSpec::Cstar)
                    }
                    _ => {
                        let b = rng.complex_nonzero(2.0);
                        let c = rng.uniform(-2.0, 2.0);
                        let s = draws::ucstaru(ell, case, b, c, &mut rng);
                        (s, ConjugationSpec::UCstarU { b, c })
                    }
                };
                // The matching classifier recovers the exact case.
                let (got, expect) = match spec {
                    ConjugationSpec::Ca { a } => (
                        classify_ca(&s, a).family,
                        [FamilyTag::CaI, FamilyTag::CaII, FamilyTag::CaIII][case as usize - 1],
                    ),
                    ConjugationSpec::Cstar => (
                        classify_cstar(&s).family,
                        [FamilyTag::CstarI, FamilyTag::CstarII, FamilyTag::CstarIII]
                            [case as usize - 1],
                    ),
                    ConjugationSpec::UCstarU { b, c } => (
                        classify_ucstaru(&s, b, c).family,
                        [FamilyTag::UCstarUI, FamilyTag::UCstarUII, FamilyTag::UCstarUIII]
                            [case as usize - 1],
                    ),
                };
                assert_eq!(got, expect, "family {family} case {case}: misclassified");
                // C W* C K_z = W K_z exactly over 20 points.
                let res = conjugation_residual(&s, &spec, 20, &mut rng);
                worst = worst.max(res);
                assert!(
                    res <= 1e-12,
                    "family {family} case {case}: residual {res} for {spec:?}"
                );
                // Involution and antilinear isometry on a random span.
                let h = rng.span(ell, 3);
                let twice = conjugate(&spec, &conjugate(&spec, &h));
                assert!(span_residual(&twice, &h) <= 1e-12);
                let h2 = rng.span(ell, 3);
                let lhs = inner_product(&conjugate(&spec, &h), &conjugate(&spec, &h2)).unwrap();
                let rhs = inner_product(&h, &h2).unwrap().conj();
                assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
                checked += 1;
            }
        }
    }
    println!(
        "ACCEPTANCE criterion-4 PASS: {checked} conjugation-family draws, worst exact residual {worst:.2e}, involution and isometry checks exact"
    );
}

#[test]
fn criterion_5_corollary_chain() {
    let mut rng = CounterRng::new(5005);
    let mut count = 0usize;
    // Every hermitian draw certifies C_a-selfadjointness at the adapted a.
    for case in [1u8, 2, 3] {
        for draw in 0..200 {
            let ell = WeightIndex((rng.next_u64() % 3) as u32);
            let s = hermitian_draw(case, ell, &mut rng);
            let report = classify_hermitian(&s);
            assert!(report.is_positive());
            let a = match report.family {
                FamilyTag::HermitianI => 2.0 * report.parameter("mu").unwrap().im,
                FamilyTag::HermitianII => rng.uniform(-2.0, 2.0),
                FamilyTag::HermitianIII => {
                    let alpha = report.parameter("alpha").unwrap().re;
                    let beta = report.parameter("beta").unwrap();
                    -2.0 * beta.im / alpha
                }
                other => panic!("unexpected family {other:?}"),
            };
            let ca = classify_ca(&s, a);
            assert!(
                ca.is_positive(),
                "case {case} draw {draw}: C_a certification failed at a={a}"
            );
            let res = conjugation_residual(&s, &ConjugationSpec::Ca { a }, 5, &mut rng);
            assert!(res <= 1e-12, "case {case} draw {draw}: residual {res}");
            count += 1;
        }
    }
    // Every unitary form-II draw certifies C_a-selfadjointness.
    for draw in 0..200 {
        let ell = WeightIndex((rng.next_u64() % 3) as u32);
        let s = draws::unitary_ii(ell, &mut rng);
        let report = classify_unitary(&s);
        assert_eq!(report.family, FamilyTag::UnitaryII);
        let a = report.parameter("alpha").unwrap().re + report.parameter("theta").unwrap().re;
        assert!(
            classify_ca(&s, a).is_positive(),
            "unitary-II draw {draw}: C_a certification failed"
        );
        count += 1;
    }
    // Every unitary form-I draw certifies UC_⋆U*-selfadjointness through
    // find_symmetry's derived (b, c).
    for draw in 0..200 {
        let ell = WeightIndex((rng.next_u64() % 3) as u32);
        let s = draws::unitary_i(ell, &mut rng);
        let findings = find_symmetry(&s);
        let has_ucu = findings.certificates.iter().any(|cert| {
            matches!(
                cert,
                SymmetryCertificate::Conjugation(ConjugationSpec::UCstarU { .. })
            )
        });
        assert!(has_ucu, "unitary-I draw {draw}: no UC*U* certificate: {findings:?}");
        count += 1;
    }
    println!(
        "ACCEPTANCE criterion-5 PASS: corollary chain certified on {count} draws with zero exceptions"
    );
}

#[test]
fn criterion_6_composition_operators() {
    let mut rng = CounterRng::new(6006);
    let ell = WeightIndex(1);
    let mus = [0.5f64, 1.0, 1.5, 2.0, 3.0];
    let shifts = [
        c64(0.0, 0.0),
        c64(1.0, 0.0),
        c64(0.0, 1.0),
        c64(1.0, 1.0),
        c64(2.0, -1.0),
    ];
    for &mu in &mus {
        for &w0 in &shifts {
            let props = comp_op_properties(ell, mu, w0).unwrap();
            let g = MoebiusMap::affine(c64(mu, 0.0), w0).unwrap();
            let s = SymbolPair::new(
                ell,
                WeightSymbol::constant(c64(1.0, 0.0)),
                MapSymbol::Moebius(g),
            );
            let mut r_selfadjoint = 0.0f64;
            let mut r_normal = 0.0f64;
            let mut r_unitary = 0.0f64;
            let mut r_isometric = 0.0f64;
            for _ in 0..10 {
                let z = rng.halfplane_point();
                let k = KernelSpan::kernel(ell, z);
                let w_k = wco_apply(&s, &k).unwrap().result;
                let wstar_k = wco_adjoint_apply(&s, &k).unwrap().result;
                let ww_star = wco_apply(&s, &wstar_k).unwrap().result;
                let wstar_w = wco_adjoint_apply(&s, &w_k).unwrap().result;
                r_selfadjoint = r_selfadjoint.max(span_residual(&wstar_k, &w_k));
                r_normal = r_normal.max(span_residual(&ww_star, &wstar_w));
                r_unitary = r_unitary.max(span_residual(&ww_star, &k));
                r_isometric = r_isometric.max(span_residual(&wstar_w, &k));
            }
            for (claim, residual, name) in [
                (props.selfadjoint, r_selfadjoint, "selfadjoint"),
                (props.normal, r_normal, "normal"),
                (props.unitary, r_unitary, "unitary"),
                (props.isometric, r_isometric, "isometric"),
            ] {
                if claim {
                    assert!(
                        residual <= 1e-10,
                        "mu={mu} w0={w0}: {name} claimed but residual {residual}"
                    );
                } else {
                    assert!(
                        residual > 1e-6,
                        "mu={mu} w0={w0}: {name} denied but residual {residual}"
                    );
                }
            }
            // Adjoint formula: <C_g K_z, K_w> = <K_z, mu^{-(l+2)} C_{g*} K_w>.
            let (scalar, g_star) = comp_adjoint(ell, mu, w0).unwrap();
            let s_star = SymbolPair::new(
                ell,
                WeightSymbol::constant(c64(1.0, 0.0)),
                MapSymbol::Moebius(g_star),
            );
            for _ in 0..10 {
                let z = rng.halfplane_point();
                let w = rng.halfplane_point();
                let kz = KernelSpan::kernel(ell, z);
                let kw = KernelSpan::kernel(ell, w);
                let lhs = inner_product(&wco_apply(&s, &kz).unwrap().result, &kw).unwrap();
                let rhs_span = wco_apply(&s_star, &kw).unwrap().result.scaled(c64(scalar, 0.0));
                let rhs = inner_product(&kz, &rhs_span).unwrap();
                assert!(
                    (lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0),
                    "adjoint formula failed at mu={mu}, w0={w0}"
                );
            }
        }
    }
    // Denjoy-Wolff: w/2 + 1 from 5+3i reaches 2 within 1e-10 in <= 40 steps.
    let g = MoebiusMap::affine(c64(0.5, 0.0), c64(1.0, 0.0)).unwrap();
    let start = HalfPlanePoint::new(c64(5.0, 3.0)).unwrap();
    let dw = denjoy_wolff(&g, start, 1e-10, 40, false).unwrap();
    assert!((dw.point.value() - c64(2.0, 0.0)).norm() <= 1e-9);
    assert!(dw.iterations <= 40);
    // Obstruction: w/2 + 1 flagged, w + 1 clear.
    match symmetry_obstruction(&g).unwrap() {
        Obstruction::NotComplexSymmetric { fixed_point } => {
            assert!((fixed_point.value() - c64(2.0, 0.0)).norm() <= 1e-10);
        }
        other => panic!("expected obstruction, got {other:?}"),
    }
    let translation = MoebiusMap::affine(c64(1.0, 0.0), c64(1.0, 0.0)).unwrap();
    assert_eq!(
        symmetry_obstruction(&translation).unwrap(),
        Obstruction::NoObstruction
    );
    println!(
        "ACCEPTANCE criterion-6 PASS: 5x5 (mu, w0) grid matches kernel computations; adjoint formula, Denjoy-Wolff, and obstruction verdicts verified"
    );
}

#[test]
fn criterion_7_self_map_predicate_vs_falsifier() {
    let mut rng = CounterRng::new(7007);
    let mut agreements = 0usize;
    let mut check = |g: MapSymbol| {
        let verdict = self_map_check(&g);
        if verdict.branch == SelfMapBranch::Boundary {
            return;
        }
        if verdict.is_self_map {
            assert!(
                grid_falsifier(&g).is_none(),
                "grid contradicts a positive verdict for {g:?}"
            );
        } else {
            let w = verdict.witness.expect("false verdicts carry witnesses");
            assert!(w.re > 0.0);
            assert!(
                g.eval(w).re <= EPS_PARAM,
                "invalid witness {w:?} for {g:?}"
            );
        }
        agreements += 1;
    };

    // Affine branch: members and violations.
    for i in 0..100 {
        let g = if i % 2 == 0 {
            MoebiusMap::affine(
                c64(rng.log_uniform(0.1, 3.0), 0.0),
                c64(rng.uniform(0.0, 2.0), rng.uniform(-2.0, 2.0)),
            )
        } else {
            match i % 3 {
                0 => MoebiusMap::affine(
                    c64(rng.log_uniform(0.1, 3.0), rng.uniform(0.2, 1.0)),
                    rng.complex_in_box(2.0),
                ),
                1 => MoebiusMap::affine(
                    c64(-rng.log_uniform(0.1, 3.0), 0.0),
                    rng.complex_in_box(2.0),
                ),
                _ => MoebiusMap::affine(
                    c64(rng.log_uniform(0.1, 3.0), 0.0),
                    c64(-rng.log_uniform(0.1, 2.0), rng.uniform(-2.0, 2.0)),
                ),
            }
        };
        check(MapSymbol::Moebius(g.unwrap()));
    }

    // Branch 1: p imaginary, q real < 0, Re u <= 0, with violations.
    for i in 0..100 {
        let p = c64(0.0, rng.uniform(-2.0, 2.0));
        let (q, u) = if i % 2 == 0 {
            (
                c64(-rng.log_uniform(0.1, 2.0), 0.0),
                c64(-rng.uniform(0.0, 2.0), rng.uniform(-2.0, 2.0)),
            )
        } else {
            match i % 3 {
                0 => (
                    c64(rng.log_uniform(0.1, 2.0), 0.0),
                    c64(-rng.uniform(0.0, 2.0), rng.uniform(-2.0, 2.0)),
                ),
                1 => (
                    c64(-rng.log_uniform(0.1, 2.0), rng.uniform(0.3, 1.5)),
                    c64(-rng.uniform(0.0, 2.0), rng.uniform(-2.0, 2.0)),
                ),
                _ => (
                    c64(-rng.log_uniform(0.1, 2.0), 0.0),
                    c64(rng.log_uniform(0.05, 2.0), rng.uniform(-2.0, 2.0)),
                ),
            }
        };
        check(MapSymbol::Moebius(MoebiusMap::special(p, q, u).unwrap()));
    }

    // Branch 2: Re p < 0 with the slack set on either side of 0.
    for i in 0..100 {
        let p = c64(-rng.log_uniform(0.1, 2.0), rng.uniform(-2.0, 2.0));
        let q = rng.complex_nonzero(2.0);
        let bound = (q.re + q.norm()) / (2.0 * p.re);
        let offset = rng.log_uniform(0.01, 2.0);
        let u1 = if i % 2 == 0 { bound - offset } else { bound + offset };
        let u = c64(u1, rng.uniform(-2.0, 2.0));
        check(MapSymbol::Moebius(MoebiusMap::special(p, q, u).unwrap()));
    }

    assert!(agreements >= 280, "too many boundary draws: {agreements}");
    println!(
        "ACCEPTANCE criterion-7 PASS: {agreements} predicate/falsifier comparisons with zero disagreements"
    );
}

#[test]
fn criterion_8_laplace_bridge() {
    let cfg = QuadratureConfig::default();
    let mut rng = CounterRng::new(8008);
    let mut worst_closed = 0.0f64;
    let mut worst_numeric = 0.0f64;
    for ell in [0u32, 1, 2] {
        let ell = WeightIndex(ell);
        for i in 0..20 {
            let z = rng.halfplane_point();
            let em = kernel_preimage(ell, z);
            // Isometry in closed forms to 1e-12.
            let lhs = lebesgue_norm_sq(&em);
            let rhs = kernel_norm_sq(ell, z);
            let rel = (lhs - rhs).abs() / rhs;
            worst_closed = worst_closed.max(rel);
            assert!(rel <= 1e-12, "ell={} z={z:?}: closed-form residual {rel}", ell.0);
            // Numeric half-line integral within 1e-6 (subsampled for speed).
            if i % 4 == 0 {
                let numeric = lebesgue_norm_sq_numeric(&em, &cfg).unwrap();
                let rel = (numeric.value.re - rhs).abs() / rhs;
                worst_numeric = worst_numeric.max(rel);
                assert!(rel <= 1e-6);
            }
            // Transform consistency: closed Laplace transform reproduces
            // kernel evaluation exactly.
            let x = rng.halfplane_point();
            let via_transform = laplace_closed(&em, x.value()).unwrap();
            let via_kernel = kernel_eval(ell, z, x);
            assert!((via_transform - via_kernel).norm() <= 1e-13 * via_kernel.norm());
        }
    }
    // Weighted-composition transport: residual <= 1e-10 over 10 internal
    // points for 20 parameter draws.
    let mut worst_cert = 0.0f64;
    for draw in 0..20 {
        let ell = WeightIndex((rng.next_u64() % 3) as u32);
        let theta = rng.complex_nonzero(2.0);
        let lambda = rng.log_uniform(0.3, 3.0);
        let b = rng.complex_nonzero(2.0);
        let c = rng.uniform(-2.0, 2.0);
        let data = pullback_wco(ell, theta, lambda, b, c).unwrap();
        worst_cert = worst_cert.max(data.certification_residual);
        assert!(
            data.certification_residual <= 1e-10,
            "draw {draw}: certification residual {}",
            data.certification_residual
        );
    }
    println!(
        "ACCEPTANCE criterion-8 PASS: Laplace bridge, worst closed-form residual {worst_closed:.2e}, worst numeric residual {worst_numeric:.2e}, worst transport residual {worst_cert:.2e}"
    );
}

/// The acceptance corpus also exercises the JSON-facing span type used by
/// the CLI: spans built from raw terms behave identically.
#[test]
fn span_construction_round_trip() {
    let mut rng = CounterRng::new(9009);
    for _ in 0..20 {
        let ell = WeightIndex((rng.next_u64() % 3) as u32);
        let terms: Vec<KernelTerm> = (0..4)
            .map(|_| KernelTerm {
                coeff: rng.complex_in_box(2.0),
                point: rng.halfplane_point(),
            })
            .collect();
        let h = KernelSpan::new(ell, terms.clone());
        let rebuilt = KernelSpan::new(ell, h.terms().to_vec());
        assert_eq!(span_residual(&h, &rebuilt), 0.0);
        let n = bergman_norm(&h).unwrap();
        assert!(n.is_finite());
    }
}
