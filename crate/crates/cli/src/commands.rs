use qflag::calculus::{tangent_space_conditions, Calculus};
use qflag::cartan::{build_cartan, Weight};
use qflag::dirac::{Geometry, Half, PlusSource};
use qflag::flag::FlagData;
use qflag::linalg::Mat;
use qflag::spinor::{invariant_functions, Function};
use qflag::uqg::axioms;

use crate::config::{Command, RunConfig};
use crate::table::{Cell, Table};

/// A finished run: the report table plus the names of failed checks.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub table: Table,
    pub failures: Vec<String>,
}

pub fn geometry(cfg: &RunConfig) -> qflag::Result<Geometry> {
    Ok(Geometry::new(build_cartan(cfg.lie_type, cfg.rank)?, cfg.r, cfg.n)?.with_plus_policy(cfg.dplus))
}

pub fn execute(cfg: &RunConfig) -> qflag::Result<Outcome> {
    let geo = geometry(cfg)?;
    match cfg.command {
        Command::Spectrum => spectrum(cfg, &geo),
        Command::Invariants => invariants(cfg, &geo),
        Command::CalculusCheck => calculus_check(cfg, &geo),
        Command::Info => info(cfg, &geo),
    }
}

pub fn coords(w: &Weight) -> String {
    w.coords().iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

fn spectrum(cfg: &RunConfig, geo: &Geometry) -> qflag::Result<Outcome> {
    let mut table = Table::new(&["q", "lambda_coords", "eigenvalue", "multiplicity"]);
    for report in geo.spectra(&cfg.q_values, cfg.cutoff)? {
        for e in &report.entries {
            table.push(vec![report.q_value.into(), coords(&e.lambda).into(), e.eigenvalue.into(), e.multiplicity.into()]);
        }
    }
    Ok(Outcome {
        table,
        failures: Vec::new(),
    })
}

/// Invariant functions of the lowest non-zero levels, labelled `μ:j`.
pub fn test_functions(fd: &FlagData, count: usize) -> qflag::Result<Vec<(String, Function)>> {
    let mut out = Vec::new();
    for mu in fd.cartan().dominant_weights_up_to(6) {
        if mu.is_zero() {
            continue;
        }
        for (j, f) in invariant_functions(fd, &mu)?.into_iter().enumerate() {
            if out.len() == count {
                return Ok(out);
            }
            out.push((format!("{}:{j}", coords(&mu)), f));
        }
    }
    Ok(out)
}

struct Checks {
    table: Table,
    failures: Vec<String>,
}

impl Checks {
    fn new(columns: &[&'static str]) -> Self {
        Checks {
            table: Table::new(columns),
            failures: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, passed: bool, row: Vec<Cell>) {
        if !passed {
            self.failures.push(name.to_string());
        }
        self.table.push(row);
    }

    fn finish(self) -> Outcome {
        Outcome {
            table: self.table,
            failures: self.failures,
        }
    }
}

/// The star check works on three nested truncations; in rank two the largest one
/// is already costly in exact arithmetic, so it runs on the first level only.
fn star_cutoff(cfg: &RunConfig) -> usize {
    if cfg.rank == 1 {
        cfg.cutoff.min(2)
    } else {
        cfg.cutoff.min(1)
    }
}

fn exact() -> Cell {
    Cell::Text("exact".into())
}

fn invariants(cfg: &RunConfig, geo: &Geometry) -> qflag::Result<Outcome> {
    let mut c = Checks::new(&["invariant", "q", "passed", "residual", "detail"]);
    let fd = &geo.flag;
    let u = fd.uq();

    let hopf = axioms::hopf_axioms(u, &axioms::pbw_products(u, 2));
    let detail = format!("{} elements", hopf.checked);
    c.push("hopf_axioms", hopf.passed(), vec!["hopf_axioms".into(), exact(), hopf.passed().into(), (hopf.failures.len() as f64).into(), detail.into()]);

    let m = geo.tangent.dim();
    let ok = m == fd.classical_dim();
    c.push("tangent_dimension", ok, vec!["tangent_dimension".into(), exact(), ok.into(), 0.0.into(), format!("m = {m}").into()]);

    let w = &geo.tangent.weights;
    let ok = (0..w.len()).all(|i| (0..i).all(|j| w[i] != w[j]));
    c.push("tangent_weights_distinct", ok, vec!["tangent_weights_distinct".into(), exact(), ok.into(), 0.0.into(), "".into()]);

    let pairing = fd.normalized_pairing_matrix(&geo.tangent)?;
    let ok = pairing == Mat::identity(m);
    c.push("pairing_identity", ok, vec!["pairing_identity".into(), exact(), ok.into(), ((&pairing - &Mat::identity(m)).nnz() as f64).into(), "".into()]);

    let eq = geo.gamma.equivariance_failures(fd, &geo.tangent, &geo.spin)?;
    let ok = eq.is_empty();
    c.push("gamma_equivariance", ok, vec!["gamma_equivariance".into(), exact(), ok.into(), (eq.len() as f64).into(), eq.join("; ").into()]);

    let space = geo.sections(cfg.cutoff)?;
    let mut bad = Vec::new();
    for b in &space.blocks {
        if geo.half_block(b, Half::Minus).is_err() {
            bad.push(coords(&b.lambda));
        }
    }
    let ok = bad.is_empty();
    let detail = format!("{} blocks up to level {}", space.blocks.len(), cfg.cutoff);
    c.push("dminus_well_defined", ok, vec!["dminus_well_defined".into(), exact(), ok.into(), (bad.len() as f64).into(), detail.into()]);

    let calc = Calculus::new(geo);
    let small = cfg.cutoff.min(3);
    for (label, f) in test_functions(fd, 3)? {
        let form = calc.commutator_form(&f, small)?;
        let residual = (&form.commutator - &form.closed_form).nnz();
        let name = format!("commutator_form[{label}]");
        c.push(&name, form.agrees(), vec![name.clone().into(), exact(), form.agrees().into(), (residual as f64).into(), format!("cutoff {small}").into()]);
    }
    if let Some((label, f)) = test_functions(fd, 1)?.pop() {
        let ok = calc.star_compatibility(&f, star_cutoff(cfg))?;
        let name = format!("star_compatibility[{label}]");
        c.push(&name, ok, vec![name.clone().into(), exact(), ok.into(), 0.0.into(), "(i[D,f])^† = i[D,f*]".into()]);
    }
    let tangent = tangent_space_conditions(geo, small.max(2))?;
    let ok = tangent.all_hold();
    c.push("tangent_space", ok, vec!["tangent_space".into(), exact(), ok.into(), 0.0.into(), format!("dim T = {} (expected {})", tangent.dim, tangent.expected_dim).into()]);

    let blocks = geo.blocks(&space)?;
    let adjoint = blocks.iter().filter(|b| b.plus_source == PlusSource::Adjoint).count();
    for &q in &cfg.q_values {
        let r = geo.gamma.adjoint_residual(fd, &geo.spin, q)?;
        let ok = r < 1e-12;
        c.push("gamma_adjoint", ok, vec!["gamma_adjoint".into(), q.into(), ok.into(), r.into(), "".into()]);

        let mut worst: f64 = 0.0;
        for b in &blocks {
            worst = worst.max(b.hermiticity_residual(geo, q)?);
        }
        let ok = worst < 1e-10;
        let detail = format!("D+ from mirror formula on {} blocks, from adjoint of D- on {adjoint}", blocks.len() - adjoint);
        c.push("hermiticity", ok, vec!["hermiticity".into(), q.into(), ok.into(), worst.into(), detail.into()]);

        let mut eigs: Vec<f64> = geo
            .spectrum(q, cfg.cutoff)?
            .entries
            .iter()
            .flat_map(|e| std::iter::repeat(e.eigenvalue).take(e.multiplicity))
            .collect();
        eigs.sort_by(f64::total_cmp);
        let n = eigs.len();
        let sym = (0..n).map(|i| (eigs[i] + eigs[n - 1 - i]).abs()).fold(0.0, f64::max);
        let ok = sym < 1e-9;
        c.push("spectrum_symmetric", ok, vec!["spectrum_symmetric".into(), q.into(), ok.into(), sym.into(), format!("{n} eigenvalues").into()]);
    }
    Ok(c.finish())
}

fn calculus_check(cfg: &RunConfig, geo: &Geometry) -> qflag::Result<Outcome> {
    let mut c = Checks::new(&["check", "function", "q", "cutoff", "value", "passed"]);
    let fd = &geo.flag;
    let calc = Calculus::new(geo);
    let fs = test_functions(fd, 5)?;
    let small = cfg.cutoff.min(3);
    for (label, f) in &fs {
        let form = calc.commutator_form(f, small)?;
        let residual = (&form.commutator - &form.closed_form).nnz();
        c.push("commutator_form", form.agrees(), vec!["commutator_form".into(), label.clone().into(), exact(), small.into(), (residual as f64).into(), form.agrees().into()]);
    }
    for (label, f) in fs.iter().take(2) {
        let ok = calc.star_compatibility(f, star_cutoff(cfg))?;
        c.push("star_compatibility", ok, vec!["star_compatibility".into(), label.clone().into(), exact(), star_cutoff(cfg).into(), 0.0.into(), ok.into()]);
    }
    let plain: Vec<Function> = fs.iter().map(|(_, f)| f.clone()).collect();
    let rank = calc.symbol_rank(&plain)?;
    let ok = rank == geo.tangent.dim();
    c.push("symbol_rank", ok, vec!["symbol_rank".into(), "all".into(), exact(), 0usize.into(), (rank as f64).into(), ok.into()]);

    let gs: Vec<Function> = plain.iter().take(2).cloned().collect();
    let mut basis = vec![Function::one(fd.cartan().rank)];
    basis.extend(plain.iter().take(3).cloned());
    let kernel_cutoff = cfg.cutoff.min(1);
    let solutions = calc.symbol_kernel(&basis, &gs)?;
    let mut ok = true;
    for pairs in &solutions {
        let r = calc.kernel_equivalence_check(pairs, kernel_cutoff)?;
        ok &= r.symbol_zero && r.operator_zero;
    }
    if let Some(g) = gs.first() {
        let r = calc.kernel_equivalence_check(&[(Function::one(fd.cartan().rank), g.clone())], kernel_cutoff)?;
        ok &= r.consistent() && !r.symbol_zero;
    }
    c.push("kernel_equivalence", ok, vec!["kernel_equivalence".into(), "symbol kernel".into(), exact(), kernel_cutoff.into(), (solutions.len() as f64).into(), ok.into()]);

    let tangent = tangent_space_conditions(geo, small.max(2))?;
    let rows = [
        ("tangent_space_dimension", tangent.dim == tangent.expected_dim, tangent.dim as f64),
        ("tangent_space_counit", tangent.counit_in_span, 0.0),
        ("tangent_space_two_term_coproduct", tangent.two_term_coproduct, 0.0),
        ("tangent_space_coproduct_in_span", tangent.coproduct_in_span.iter().all(|&b| b), 0.0),
        ("tangent_space_levi_stable", tangent.levi_stable, 0.0),
        ("tangent_space_torus_absorbed", tangent.torus_absorbed, 0.0),
    ];
    for (name, ok, value) in rows {
        c.push(name, ok, vec![name.into(), "".into(), exact(), small.into(), value.into(), ok.into()]);
    }

    let cutoffs: Vec<usize> = (1..=cfg.cutoff.max(1)).collect();
    for (label, f) in fs.iter().take(3) {
        for &q in &cfg.q_values {
            let report = calc.boundedness_probe(f, q, &cutoffs)?;
            let monotone = report.worst_monotonicity_violation() <= 1e-12;
            for (l, norm) in &report.norms {
                c.push("boundedness", monotone, vec!["boundedness".into(), label.clone().into(), q.into(), (*l).into(), (*norm).into(), monotone.into()]);
            }
        }
    }
    Ok(c.finish())
}

fn info(cfg: &RunConfig, geo: &Geometry) -> qflag::Result<Outcome> {
    let mut table = Table::new(&["item", "lambda_coords", "value"]);
    table.push(vec!["m".into(), "".into(), geo.tangent.dim().into()]);
    table.push(vec!["dim_sigma".into(), "".into(), geo.spin.dim().into()]);
    for s in &geo.spin.summands {
        table.push(vec![format!("sigma_degree_{}", s.degree).into(), coords(&s.highest).into(), s.dim.into()]);
    }
    let space = geo.sections(cfg.cutoff)?;
    let blocks = geo.blocks(&space)?;
    for (sb, db) in space.blocks.iter().zip(&blocks) {
        let l = coords(&sb.lambda);
        table.push(vec!["hom_dim".into(), l.clone().into(), sb.hom_dim().into()]);
        table.push(vec!["dim_v_lambda".into(), l.clone().into(), sb.leg_dim().into()]);
        table.push(vec!["dplus_source".into(), l.into(), db.plus_source.name().into()]);
    }
    Ok(Outcome {
        table,
        failures: Vec::new(),
    })
}
