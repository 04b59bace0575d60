//! Running a parsed job.

use hochkit_core::derivlift::{
    class_of_automorphism, derivation_of_automorphism, ext_pullback_class, hh1_mod, integrable_chain, is_inner,
    preserves_ideal, AutR, InnerTest,
};
use hochkit_core::hochschild::{
    bockstein, describe_class, describe_derivation, les_exactness_report, level_compare, pi_shift_hh1,
    twisted_bockstein, CohomClass, Cohomology,
};
use hochkit_core::linalg::{format_order, Subgroup};
use hochkit_core::morita::morita_invariance_report;
use hochkit_core::{Algebra, Bimodule, ChainRing, LinearMap};

use crate::jobspec::{parse_spec, Command, Elem, Format, JobSpec};
use crate::report::Report;

/// Exit status, stdout and stderr of one job.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

fn input_error(message: String) -> Outcome {
    Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: message + "\n" }
}

/// Parse and run a job file; `format` overrides the file's own choice.
pub fn run_source(source: &str, format: Option<Format>) -> Outcome {
    match parse_spec(source) {
        Ok(job) => execute(&job, format),
        Err(e) => input_error(e.to_string()),
    }
}

pub fn execute(job: &JobSpec, format: Option<Format>) -> Outcome {
    match run(job) {
        Ok(report) => Outcome {
            code: if report.ok { EXIT_OK } else { EXIT_VERDICT },
            stdout: report.render(format.unwrap_or(job.format)),
            stderr: String::new(),
        },
        Err(e) => input_error(format!("{}: {e}", command_summary(&job.command))),
    }
}

/// `chain r=1 s_max=3`, for diagnostics.
pub fn command_summary(c: &Command) -> String {
    let args = match c {
        Command::Hh { degree, level } => match level {
            Some(l) => format!("degree={degree} level={l}"),
            None => format!("degree={degree}"),
        },
        Command::Chain { r, s_max } => format!("r={r} s_max={s_max}"),
        Command::Bockstein { r, degree } => format!("r={r} degree={degree}"),
        Command::LesCheck { r, max_degree } => format!("r={r} max_degree={max_degree}"),
        Command::LevelCheck { r, s1, s2, degree } => format!("r={r} s1={s1} s2={s2} degree={degree}"),
        Command::PiShift { r } => format!("r={r}"),
        Command::MoritaCheck { r, s_max, n } => format!("r={r} s_max={s_max} n={n}"),
        Command::Report { r, .. } => format!("r={r}"),
    };
    format!("{} {args}", c.name())
}

fn list(items: &[usize]) -> String {
    format!("[{}]", items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn order(ring: &ChainRing, log: u64) -> String {
    format_order(ring.p(), log)
}

fn name_of(a: &Algebra, h: &Cohomology, c: &CohomClass) -> String {
    describe_class(a, h, c)
}

/// Names of the Howell generators of a subgroup of `h`.
fn subgroup_names(a: &Algebra, h: &Cohomology, g: &Subgroup) -> String {
    let names: Vec<String> = g
        .generators(h.ring())
        .into_iter()
        .map(|coords| name_of(a, h, &CohomClass { degree: h.degree, coords }))
        .collect();
    if names.is_empty() {
        "0".into()
    } else {
        names.join(";")
    }
}

fn vectors(ring: &ChainRing, rows: &[Vec<Elem>]) -> Vec<Vec<hochkit_core::RingElem>> {
    rows.iter().map(|v| v.iter().map(|e| e.to_ring(ring)).collect()).collect()
}

fn run(job: &JobSpec) -> hochkit_core::Result<Report> {
    let ring = ChainRing::new(job.ring.clone())?;
    let a = job.algebra.build(&ring)?;
    let mut rep = Report::new(job.command.name());
    match &job.command {
        Command::Hh { degree, level } => {
            let h = match level {
                Some(l) => Cohomology::compute(&a, &Bimodule::regular_level(&a, *l), *degree)?,
                None => Cohomology::regular(&a, *degree)?,
            };
            let basis: Vec<String> = h.basis().iter().map(|c| name_of(&a, &h, c)).collect();
            rep.field("order", order(&ring, h.log_order()))
                .field("exponents", list(h.exponents()))
                .field("basis", basis.join(","));
        }
        Command::Chain { r, s_max } => {
            let chain = integrable_chain(&a, *r, *s_max)?;
            let bar = a.reduce(*r)?;
            let h = &chain.hh1;
            let rows = chain
                .levels
                .iter()
                .map(|(s, g)| vec![s.to_string(), order(h.ring(), g.log_order(h.ring())), subgroup_names(&bar, h, g)])
                .collect();
            rep.field("r", r)
                .field("s_max", s_max)
                .field("hh1_order", order(h.ring(), h.log_order()))
                .field("stabilizes_from", chain.stabilizes_from())
                .table(&["s", "order", "generators"], rows);
            rep.ok = chain.is_descending();
        }
        Command::Bockstein { r, degree } => {
            let bar = a.reduce(*r)?;
            let src = Cohomology::regular(&bar, *degree)?;
            let dst = Cohomology::regular(&bar, degree + 1)?;
            let rows = src
                .basis()
                .iter()
                .map(|c| Ok(vec![name_of(&bar, &src, c), name_of(&bar, &dst, &bockstein(&a, *r, &src, c, &dst)?)]))
                .collect::<hochkit_core::Result<Vec<_>>>()?;
            rep.field("r", r)
                .field("degree", degree)
                .field("source_order", order(src.ring(), src.log_order()))
                .field("target_order", order(dst.ring(), dst.log_order()))
                .table(&["class", "image"], rows);
        }
        Command::LesCheck { r, max_degree } => {
            let les = les_exactness_report(&a, *r, *max_degree)?;
            let rows = les
                .nodes
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    let verdict = if n.exact { "exact" } else { "not exact" };
                    vec![i.to_string(), n.name.clone(), n.order.clone(), verdict.to_string()]
                })
                .collect();
            let exact = les.exact();
            rep.ok = exact;
            rep.field("r", r)
                .field("max_degree", max_degree)
                .field("verdict", if exact { "exact" } else { "not-exact" })
                .table(&["index", "node", "order", "verdict"], rows);
        }
        Command::LevelCheck { r, s1, s2, degree } => {
            let c = level_compare(&a, *r, *s1, *s2, *degree)?;
            rep.ok = c.equal;
            rep.field("r", r)
                .field("s1", s1)
                .field("s2", s2)
                .field("degree", degree)
                .field("first", list(&c.first))
                .field("second", list(&c.second))
                .field("verdict", if c.equal { "equal" } else { "different" });
        }
        Command::PiShift { r } => {
            let s = pi_shift_hh1(&a, *r)?;
            let (lo, hi) = (a.reduce(*r)?, a.reduce(r + 1)?);
            let rows = s
                .source
                .basis()
                .iter()
                .map(|c| Ok(vec![name_of(&lo, &s.source, c), name_of(&hi, &s.target, &s.apply(c)?)]))
                .collect::<hochkit_core::Result<Vec<_>>>()?;
            rep.ok = s.injective;
            rep.field("r", r)
                .field("source_order", order(s.source.ring(), s.source.log_order()))
                .field("target_order", order(s.target.ring(), s.target.log_order()))
                .field("image_order", order(s.target.ring(), s.image_log_order))
                .field("verdict", if s.injective { "injective" } else { "not-injective" })
                .table(&["class", "image"], rows);
        }
        Command::MoritaCheck { r, s_max, n } => {
            let m = morita_invariance_report(&a, *r, *s_max, *n)?;
            let (bar, big) = (a.reduce(*r)?, a.reduce(*r)?.matrix_algebra(*n)?);
            let (hb, hm) = (&m.base_chain.hh1, &m.matrix_chain.hh1);
            let rows = m
                .levels
                .iter()
                .zip(m.base_chain.levels.iter().zip(&m.matrix_chain.levels))
                .map(|(l, ((_, gb), (_, gm)))| {
                    vec![
                        l.s.to_string(),
                        order(hb.ring(), l.base_log_order),
                        subgroup_names(&bar, hb, gb),
                        order(hm.ring(), l.matrix_log_order),
                        subgroup_names(&big, hm, gm),
                        if l.matches { "yes" } else { "no" }.to_string(),
                    ]
                })
                .collect();
            let ok = m.verdict();
            rep.ok = ok;
            rep.field("r", r)
                .field("s_max", s_max)
                .field("n", n)
                .field("transfer", m.transfer.matrix.format(hm.ring()))
                .field("bijective", m.transfer.bijective)
                .field("automorphisms", if m.automorphisms_correspond { "match" } else { "mismatch" })
                .field("verdict", if ok { "match" } else { "mismatch" })
                .table(&["s", "base_order", "base_generators", "matrix_order", "matrix_generators", "match"], rows);
        }
        Command::Report { r, images, ideal } => {
            let alpha = LinearMap::from_images(a.rank(), vectors(&ring, images));
            let aut = AutR::new(&a, alpha, *r)?;
            let bar = a.reduce(*r)?;
            let h = hh1_mod(&a, *r)?;
            let class = class_of_automorphism(&a, &aut, &h)?;
            let twisted = twisted_bockstein(&a, *r, &aut.alpha, &h)?;
            let ext = ext_pullback_class(&a, &aut, &h)?;
            let mu = derivation_of_automorphism(&a, &aut)?;
            let b = a.at_precision(2 * r)?;
            let inner = match is_inner(&b, &aut.alpha.convert(&ring, b.ring())) {
                InnerTest::Yes(_) => "yes",
                InnerTest::No => "no",
                InnerTest::Indeterminate => "indeterminate",
            };
            let coords: Vec<String> = class.coords.iter().map(|&x| h.ring().format(x)).collect();
            rep.field("r", r)
                .field("derivation", describe_derivation(&bar, &mu))
                .field("class", name_of(&bar, &h, &class))
                .field("coords", format!("[{}]", coords.join(",")))
                .field("twisted_bockstein", name_of(&bar, &h, &twisted))
                .field("ext_pullback", name_of(&bar, &h, &ext))
                .field("inner_mod_2r", inner);
            if let Some(gens) = ideal {
                let gens: Vec<_> = vectors(bar.ring(), gens);
                rep.field("preserves_ideal", preserves_ideal(&bar, &mu, &gens)?);
            }
            rep.ok = twisted == class && ext == h.neg(&class);
            rep.field("verdict", if rep.ok { "consistent" } else { "inconsistent" });
        }
    }
    Ok(rep)
}
