//! Acceptance suite: one numbered check per line, `PASS` or `FAIL`, then a
//! nonzero exit status if any check failed.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use nalgebra::{Complex, DMatrix};
use qflag::calculus::{tangent_space_conditions, Calculus};
use qflag::cartan::{build_cartan, LieType, Weight};
use qflag::clifford::{gamma_embedding, SpinSpace};
use qflag::dirac::{Geometry, Half, Part, PlusSource};
use qflag::flag::FlagData;
use qflag::linalg::numeric::orthonormal_form;
use qflag::linalg::Mat;
use qflag::reps::irrep;
use qflag::scalar::Scalar;
use qflag::spinor::{invariant_functions, Function};
use qflag::uqg::axioms::{hopf_axioms, pbw_letters, pbw_products};
use qflag::uqg::{AlgebraElement, RossoForm, Uq};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            pass,
            detail: detail.into(),
        }
    }
}

type Check = qflag::Result<Verdict>;

const QS: [f64; 3] = [1.05, 1.2, 2.0];

fn uq(rank: usize) -> Uq {
    Uq::new(build_cartan(LieType::A, rank).unwrap()).unwrap()
}

fn geometry(rank: usize) -> Geometry {
    Geometry::new(build_cartan(LieType::A, rank).unwrap(), 0, 1).unwrap()
}

fn random_element(u: &Uq, rng: &mut ChaCha8Rng, letters: usize) -> AlgebraElement {
    let mut x = AlgebraElement::zero();
    for _ in 0..2 {
        let mut word = Vec::new();
        for _ in 0..rng.gen_range(0..=letters) {
            let i = rng.gen_range(0..u.rank());
            word.push(match rng.gen_range(0..3) {
                0 => u.e(i),
                1 => u.f(i),
                _ => {
                    let mut w = vec![0; u.rank()];
                    w[i] = rng.gen_range(-1..=1);
                    u.k(&Weight(w))
                }
            });
        }
        let refs: Vec<&AlgebraElement> = word.iter().collect();
        x = x.add(&u.mul_all(&refs).scale(&Scalar::from_int(rng.gen_range(1..4))));
    }
    x
}

fn hopf_suite() -> Check {
    let mut detail = Vec::new();
    let mut pass = true;
    for rank in [1, 2] {
        let u = uq(rank);
        let report = hopf_axioms(&u, &pbw_products(&u, 3));
        pass &= report.passed();
        detail.push(format!("A{rank}: {} identities, {} failures", report.checked, report.failures.len()));
        if let Some(f) = report.failures.first() {
            detail.push(f.clone());
        }
    }
    Ok(Verdict::new(pass, detail.join("; ")))
}

fn star_and_rosso() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut star_fail = 0;
    let (mut inv_fail, mut vanish_fail, mut vanish_checked, mut positive_fail) = (0, 0, 0, 0);
    for rank in [1, 2] {
        let u = uq(rank);
        for _ in 0..100 {
            let x = random_element(&u, &mut rng, 3);
            let y = random_element(&u, &mut rng, 3);
            if u.star(&u.ad(&x, &y)) != u.ad(&u.theta(&x), &u.star(&y)) {
                star_fail += 1;
            }
        }
        let form = RossoForm::new(&u)?;
        for _ in 0..10 {
            let z = random_element(&u, &mut rng, 2);
            let x = random_element(&u, &mut rng, 2);
            let y = random_element(&u, &mut rng, 2);
            let lhs = form.pairing(&u, &u.ad(&z, &x), &y)?;
            let rhs = form.pairing(&u, &x, &u.ad(&u.antipode(&z), &y))?;
            if lhs != rhs {
                inv_fail += 1;
            }
        }
        let letters: Vec<AlgebraElement> = pbw_letters(&u).into_iter().filter(|x| u.weight_of(x).is_some_and(|w| !w.is_zero())).collect();
        for x in pbw_products(&u, 2) {
            let Some(wx) = u.weight_of(&x) else { continue };
            for y in &letters {
                let wy = u.weight_of(y).unwrap();
                if (&wx + &wy).is_zero() {
                    continue;
                }
                vanish_checked += 1;
                if !form.pairing(&u, &x, y)?.is_zero() {
                    vanish_fail += 1;
                }
            }
        }
        let fd = FlagData::new(u.cartan().clone(), 0, 1)?;
        let tb = fd.tangent()?;
        for x in tb.minus.iter().chain(&tb.plus) {
            let p = form.pairing(&u, &u.star(x), x)?;
            positive_fail += QS.iter().filter(|q| !(u.cartan().eval(&p, **q) > 0.0)).count();
        }
    }
    let pass = star_fail + inv_fail + vanish_fail + positive_fail == 0;
    Ok(Verdict::new(
        pass,
        format!(
            "star/ad failures {star_fail}/200, ad-invariance failures {inv_fail}/20, \
             weight vanishing failures {vanish_fail}/{vanish_checked}, positivity failures {positive_fail}"
        ),
    ))
}

fn tangent_space() -> Check {
    let mut detail = Vec::new();
    let mut pass = true;
    for (rank, expected) in [(1, 1), (2, 2)] {
        let fd = FlagData::new(build_cartan(LieType::A, rank)?, 0, 1)?;
        let tb = fd.tangent()?;
        let mut weights = tb.weights.clone();
        weights.sort();
        weights.dedup();
        let identity = fd.normalized_pairing_matrix(&tb)? == Mat::identity(tb.dim());
        pass &= tb.dim() == expected && weights.len() == tb.dim() && identity;
        detail.push(format!("A{rank}: dim {} (expected {expected}), distinct weights {}, pairing = I {identity}", tb.dim(), weights.len()));
    }
    Ok(Verdict::new(pass, detail.join("; ")))
}

fn gamma_checks() -> Check {
    let mut detail = Vec::new();
    let mut pass = true;
    for rank in [1, 2] {
        let fd = FlagData::new(build_cartan(LieType::A, rank)?, 0, 1)?;
        let tb = fd.tangent()?;
        let spin = SpinSpace::new(&fd, &tb)?;
        let (spin, gamma) = gamma_embedding(&fd, &tb, &spin)?;
        let failures = gamma.equivariance_failures(&fd, &tb, &spin)?;
        let adjoint = QS.iter().map(|q| gamma.adjoint_residual(&fd, &spin, *q)).collect::<qflag::Result<Vec<_>>>()?;
        let adjoint = adjoint.into_iter().fold(0.0, f64::max);
        let classical = classical_gamma_mismatch(&fd, &tb, &spin, &gamma, 1.0 + 1e-6);
        pass &= failures.is_empty() && adjoint < 1e-12 && classical < 1e-4;
        detail.push(format!(
            "A{rank}: equivariance failures {}, adjoint residual {adjoint:.1e}, classical mismatch {classical:.1e}",
            failures.len()
        ));
    }
    Ok(Verdict::new(pass, detail.join("; ")))
}

/// Largest entrywise gap, relative to the largest entry, between `|γ(X_i)|`
/// and `|ι_i|` for the classical contraction operators on `Λ ℂ^m`.
fn classical_gamma_mismatch(
    fd: &FlagData,
    tb: &qflag::flag::TangentBasis,
    spin: &SpinSpace,
    gamma: &qflag::clifford::GammaMap,
    q: f64,
) -> f64 {
    let m = tb.dim();
    let c = fd.cartan();
    let t = c.t_of_q(q);
    let betas: Vec<Weight> = tb.weights.iter().map(|w| -w).collect();
    let mask_of = |w: &Weight| {
        (0usize..(1 << m))
            .find(|mask| {
                let v = betas
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .fold(spin.charge.clone(), |v, (_, b)| &v + b);
                &v == w
            })
            .expect("every spin weight is a charge plus a sum of distinct tangent weights")
    };
    let masks: Vec<usize> = spin.sigma.weights().iter().map(mask_of).collect();
    let cl = SpinSpace::classical_gammas(m);
    let g = spin.sigma.gram().eval(t);
    let mut worst: f64 = 0.0;
    for i in 0..m {
        let iota: DMatrix<Complex<f64>> = (&cl[2 * i + 1] * Complex::new(0.0, -1.0) - &cl[2 * i]) * Complex::new(0.5, 0.0);
        let factor = (c.eval(&tb.norms[i], q) / c.eval(&gamma.clifford_scale, q)).sqrt();
        let ours = orthonormal_form(&gamma.minus[i].eval(t), &g, &g).expect("positive Gram") * factor;
        let scale = iota.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for a in 0..spin.dim() {
            for b in 0..spin.dim() {
                worst = worst.max((ours[(a, b)].abs() - iota[(masks[a], masks[b])].norm()).abs() / scale);
            }
        }
    }
    worst
}

fn dminus_well_defined() -> Check {
    let mut detail = Vec::new();
    for (rank, cutoff) in [(1, 8), (2, 4)] {
        let geo = geometry(rank);
        let space = geo.sections(cutoff)?;
        for b in &space.blocks {
            geo.half_block(b, Half::Minus)?;
        }
        detail.push(format!("A{rank} L={cutoff}: {} blocks with zero residual", space.blocks.len()));
    }
    Ok(Verdict::new(true, detail.join("; ")))
}

fn self_adjointness() -> Check {
    let mut detail = Vec::new();
    let mut pass = true;
    for (rank, cutoff) in [(1, 8), (2, 3)] {
        let geo = geometry(rank);
        let space = geo.sections(cutoff)?;
        let blocks = geo.blocks(&space)?;
        let (mut herm, mut imag, mut mirror): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for q in QS {
            for b in &blocks {
                herm = herm.max(b.hermiticity_residual(&geo, q)?);
                let m = b.orthonormal(&geo, q, Part::Full)?;
                imag = imag.max(m.complex_eigenvalues().iter().map(|z| z.im.abs()).fold(0.0, f64::max));
                if b.plus_source == PlusSource::Mirror {
                    mirror = mirror.max(b.adjoint_pair_residual(&geo, q)?);
                }
            }
        }
        let mirrored = blocks.iter().filter(|b| b.plus_source == PlusSource::Mirror).count();
        pass &= herm < 1e-10 && imag < 1e-12 && mirror < 1e-10;
        detail.push(format!(
            "A{rank} L={cutoff}: hermiticity {herm:.1e}, imaginary parts {imag:.1e}, \
             mirror D+ vs D-^T {mirror:.1e} on {mirrored}/{} blocks",
            blocks.len()
        ));
    }
    Ok(Verdict::new(pass, detail.join("; ")))
}

/// Classical Dirac spectrum of the round `S²` with spin^c charge one: for
/// spin `j = k + 1/2` the eigenvalues `±√(j(j+1) + 1/4)`, each with
/// multiplicity `2j + 1`.
fn classical_sphere_spectrum(blocks: usize) -> Vec<(f64, usize)> {
    let mut out = Vec::new();
    for k in 0..blocks {
        let j = k as f64 + 0.5;
        let e = (j * (j + 1.0) + 0.25).sqrt();
        let mult = (2.0 * j + 1.0) as usize;
        out.push((-e, mult));
        out.push((e, mult));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn classical_limit() -> Check {
    let geo = geometry(1);
    let q = 1.001;
    let mut detail = Vec::new();
    let mut pass = true;
    for cutoff in [6, 11] {
        let report = geo.spectrum(q, cutoff)?;
        let ours: Vec<(f64, usize)> = report.entries.iter().map(|e| (e.eigenvalue, e.multiplicity)).collect();
        let oracle = classical_sphere_spectrum(ours.len() / 2);
        let scale = ours.iter().zip(&oracle).map(|(a, b)| a.0 * b.0).sum::<f64>() / oracle.iter().map(|b| b.0 * b.0).sum::<f64>();
        let worst = ours
            .iter()
            .zip(&oracle)
            .map(|(a, b)| (a.0 / scale - b.0).abs() / b.0.abs())
            .fold(0.0, f64::max);
        let mults = ours.len() == oracle.len() && ours.iter().zip(&oracle).all(|(a, b)| a.1 == b.1);
        let top = ours.len() / 2;
        pass &= mults && worst < 0.01;
        detail.push(format!(
            "L={cutoff}: k=0..{}, fitted scale {scale:.6}, worst relative error {worst:.1e}, multiplicities match {mults}",
            top.saturating_sub(1)
        ));
    }
    Ok(Verdict::new(pass, detail.join("; ")))
}

fn q_number(x: f64, q: f64) -> f64 {
    (q.powf(x) - q.powf(-x)) / (q - 1.0 / q)
}

/// Closed-form Dirac block of the Podleś sphere on `V_j`, `j = k + 1/2`: the
/// two middle weight vectors `m = ∓1/2` exchanged by the matrix element
/// `⟨j, m+1 | E | j, m⟩ = √([j-m]_q [j+m+1]_q)`.
fn podles_closed_form_block(j: f64, q: f64) -> DMatrix<f64> {
    let m = -0.5;
    let e = (q_number(j - m, q) * q_number(j + m + 1.0, q)).sqrt();
    DMatrix::from_row_slice(2, 2, &[0.0, e, e, 0.0])
}

fn podles_coincidence() -> Check {
    let geo = geometry(1);
    let cutoff = 9;
    let mut detail = Vec::new();
    let mut pass = true;
    for q in [1.1, 1.5] {
        let report = geo.spectrum(q, cutoff)?;
        let mut pipeline: BTreeMap<i64, Vec<(f64, usize)>> = BTreeMap::new();
        for e in &report.entries {
            pipeline.entry(e.lambda.0[0]).or_default().push((e.eigenvalue, e.multiplicity));
        }
        let mut closed: BTreeMap<i64, Vec<(f64, usize)>> = BTreeMap::new();
        for &l in pipeline.keys() {
            let j = l as f64 / 2.0;
            let mut ev: Vec<f64> = podles_closed_form_block(j, q).symmetric_eigen().eigenvalues.iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            closed.insert(l, ev.into_iter().map(|e| (e, l as usize + 1)).collect());
        }
        let scale = pipeline[&1].iter().map(|e| e.0.abs()).fold(0.0, f64::max) / closed[&1].iter().map(|e| e.0.abs()).fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        let mut shapes = true;
        for (l, ours) in &pipeline {
            let theirs = &closed[l];
            shapes &= ours.len() == theirs.len() && ours.iter().zip(theirs).all(|(a, b)| a.1 == b.1);
            for (a, b) in ours.iter().zip(theirs) {
                worst = worst.max((a.0 - scale * b.0).abs() / (scale * b.0).abs());
            }
        }
        pass &= shapes && worst < 1e-9;
        detail.push(format!("q={q}: {} blocks, fitted scale {scale:.12}, worst relative gap {worst:.1e}", pipeline.len()));
    }
    Ok(Verdict::new(pass, detail.join("; ")))
}

fn test_functions(fd: &FlagData, count: usize) -> qflag::Result<Vec<Function>> {
    let mut out = Vec::new();
    for mu in fd.cartan().dominant_weights_up_to(6) {
        if !mu.is_zero() {
            out.extend(invariant_functions(fd, &mu)?);
        }
        if out.len() >= count {
            break;
        }
    }
    out.truncate(count);
    Ok(out)
}

fn commutator_forms() -> Check {
    let mut detail = Vec::new();
    let mut pass = true;
    for (rank, cutoff) in [(1, 5), (2, 3)] {
        let geo = geometry(rank);
        let calc = Calculus::new(&geo);
        let fs = test_functions(&geo.flag, 5)?;
        let agree = fs.iter().map(|f| Ok(calc.commutator_form(f, cutoff)?.agrees())).collect::<qflag::Result<Vec<bool>>>()?;
        let ok = agree.iter().filter(|a| **a).count();
        pass &= ok == fs.len();
        detail.push(format!("A{rank} L={cutoff}: {ok}/{} functions agree exactly in Q(q)", fs.len()));
    }
    Ok(Verdict::new(pass, detail.join("; ")))
}

fn boundedness() -> Check {
    let geo = geometry(1);
    let calc = Calculus::new(&geo);
    let mu = Weight(vec![2]);
    let weights = irrep(geo.flag.uq(), &mu)?.weights().to_vec();
    let generators = invariant_functions(&geo.flag, &mu)?;
    let f = generators
        .iter()
        .find(|f| {
            f.terms
                .iter()
                .all(|t| t.beta.iter().enumerate().all(|(i, b)| b.is_zero() || weights[i].is_zero()))
        })
        .expect("a weight-zero Podleś generator");
    let cutoffs: Vec<usize> = (1..=12).collect();
    let report = calc.boundedness_probe(f, 1.2, &cutoffs)?;
    let norm = |l: usize| report.norms.iter().find(|(c, _)| *c == l).map(|(_, n)| *n).unwrap();
    let change = (norm(12) - norm(10)).abs() / norm(12);
    let violation = report.worst_monotonicity_violation();
    Ok(Verdict::new(
        change < 1e-3 && violation <= 1e-12,
        format!(
            "weight-zero generator at q=1.2: ‖i[D-,f]‖ = {:.9} (L=10), {:.9} (L=12), relative change {change:.1e}, \
             monotonicity violation {violation:.1e}",
            norm(10),
            norm(12)
        ),
    ))
}

fn tangent_space_axioms() -> Check {
    let mut detail = Vec::new();
    let mut pass = true;
    for (rank, level) in [(1, 5), (2, 5)] {
        let geo = geometry(rank);
        let r = tangent_space_conditions(&geo, level)?;
        pass &= r.all_hold() && r.dim == r.expected_dim;
        detail.push(format!(
            "A{rank} level {level}: ε in T {}, two-term coproduct {}, Levi-stable {}, dim T {} (expected {})",
            r.counit_in_span, r.two_term_coproduct, r.levi_stable, r.dim, r.expected_dim
        ));
    }
    Ok(Verdict::new(pass, detail.join("; ")))
}

fn determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("qflag-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| qflag::Error::NumericalFailure(e.to_string()))?;
    let mut detail = Vec::new();
    let mut pass = true;
    for (command, format) in [("spectrum", "csv"), ("spectrum", "json"), ("calculus-check", "csv"), ("calculus-check", "json")] {
        let mut outputs = Vec::new();
        for threads in ["1", "3"] {
            let path = dir.join(format!("{command}-{threads}.{format}"));
            let status = Command::new(env!("CARGO_BIN_EXE_qflag"))
                .args([command, "--q", "1.1,1.5", "--cutoff", "4", "--format", format, "--out"])
                .arg(&path)
                .env("QFLAG_THREADS", threads)
                .status()
                .expect("qflag runs");
            pass &= status.success();
            outputs.push(std::fs::read(&path).unwrap_or_default());
        }
        let same = !outputs[0].is_empty() && outputs[0] == outputs[1];
        pass &= same;
        detail.push(format!("{command} {format}: identical {same}"));
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(Verdict::new(pass, detail.join("; ")))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("exact Hopf suite", hopf_suite),
        ("star/adjoint compatibility and Rosso form", star_and_rosso),
        ("tangent space", tangent_space),
        ("gamma equivariance", gamma_checks),
        ("D- well-definedness", dminus_well_defined),
        ("self-adjointness", self_adjointness),
        ("classical limit", classical_limit),
        ("Podleś coincidence", podles_coincidence),
        ("commutators as one-forms", commutator_forms),
        ("boundedness probe", boundedness),
        ("quantum tangent space", tangent_space_axioms),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = check().unwrap_or_else(|e| Verdict::new(false, format!("error: {e}")));
        failed += usize::from(!verdict.pass);
        println!(
            "criterion {:>2} {}: {} ({:.1}s) {}",
            i + 1,
            if verdict.pass { "PASS" } else { "FAIL" },
            name,
            start.elapsed().as_secs_f64(),
            verdict.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
