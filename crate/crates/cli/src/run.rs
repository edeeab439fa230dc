use equivar::gm_geometry::{
    chambers, fixed_components, is_critical, unstable_locus, wall_type, window_membership,
    SheafComplex, SpaceKind, WindowSpec,
};
use equivar::graded_complexes::{
    restricted_local_cohomology, restricted_local_cohomology_in_window, sod_decompose,
    sod_decompose_in_window, upper_stable_bound, GradedVectorSpaceComplex, StabilityConfig,
};
use equivar::k_localization::{
    atiyah_bott_index, fixed_contribution, semistable_index, sheaf_character, wall_crossing_delta,
    IndexReport, DEFAULT_TRUNCATION,
};
use equivar::linalg::IntMatrix;
use equivar::windows_walls::{
    monodromy_in_quotient_basis, monodromy_matrix, quasi_symmetric, Rank1Window,
};

use crate::job::{ComplexSpec, JobSpec, Op};
use crate::report::{Node, Report};
use crate::CliError;

fn vector_space(v: &GradedVectorSpaceComplex) -> Report {
    let (lo, hi) = v.window();
    let rows = v
        .entries()
        .map(|((deg, w), d)| vec![deg.to_string(), w.to_string(), d.to_string()])
        .collect();
    Report::new().with("window", format!("[{lo}, {hi}]")).with(
        "cohomology",
        Node::table(&["degree", "weight", "dim"], rows),
    )
}

fn matrix(m: &IntMatrix) -> Node {
    let columns: Vec<String> = (0..m.size()).map(|j| format!("c{j}")).collect();
    let columns: Vec<&str> = columns.iter().map(String::as_str).collect();
    let rows = m
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.to_string()).collect())
        .collect();
    Node::table(&columns, rows)
}

fn window_points(w: &Rank1Window) -> Report {
    Report::new()
        .with("theta", w.theta.to_string())
        .with("characters", Node::list(w.lattice_points.iter().copied()))
}

fn index_rows(r: &IndexReport) -> Node {
    let rows = r
        .contributions
        .iter()
        .map(|c| {
            vec![
                c.component.to_string(),
                c.w.to_string(),
                c.side.to_string(),
                c.chi.to_string(),
            ]
        })
        .collect();
    Node::table(&["component", "w", "side", "chi"], rows)
}

/// Runs a validated job. Output depends only on the job.
pub fn run(job: &JobSpec) -> Result<Report, CliError> {
    job.validate()?;
    let p = &job.params;
    let order = p.order.unwrap_or(DEFAULT_TRUNCATION);
    let config = StabilityConfig { j_max: p.j_max };
    let mut report = Report::new().with("op", job.op.name());
    match job.op {
        Op::Lcoh => {
            let f = job.graded_complex()?;
            let w = p.w.expect("validated");
            let h = match p.window {
                Some((lo, hi)) => restricted_local_cohomology_in_window(f, w, lo, hi, &config)?,
                None => restricted_local_cohomology(f, w, &config)?,
            };
            report
                .set("w", w)
                .set("stable_from", upper_stable_bound(f, w))
                .set("result", vector_space(&h));
        }
        Op::Sod => {
            let f = job.graded_complex()?;
            let w = p.w.expect("validated");
            let s = match p.window {
                Some((lo, hi)) => sod_decompose_in_window(f, w, lo, hi, &config)?,
                None => sod_decompose(f, w, &config)?,
            };
            report
                .set("w", w)
                .set("lower", vector_space(&s.lower))
                .set("middle", vector_space(&s.middle))
                .set("upper", vector_space(&s.upper))
                .set("reassembles", s.reassembles(f)?);
        }
        Op::Cohomology => {
            let f = job.graded_complex()?;
            let (lo, hi) = p.window.unwrap_or_else(|| f.default_window());
            report.set("result", vector_space(&f.cohomology_in_window(lo, hi)?));
        }
        Op::Strata => {
            let space = job.gm_space()?;
            let a = p.a.as_ref().expect("validated");
            let comps = fixed_components(space);
            let locus = unstable_locus(space, a);
            let rows = locus
                .strata
                .iter()
                .map(|s| {
                    let closure: Vec<String> = s
                        .closure
                        .iter()
                        .map(|(i, sign)| format!("S{i}{sign}"))
                        .collect();
                    vec![
                        format!("S{}{}", s.component, s.sign),
                        comps[s.component].w.to_string(),
                        s.dimension.to_string(),
                        s.condition(),
                        closure.join(" "),
                    ]
                })
                .collect();
            report
                .set("a", a.to_string())
                .set("critical", is_critical(space, a))
                .set("closure_ordered", locus.closure_ordered)
                .set(
                    "strata",
                    Node::table(&["stratum", "w", "dim", "condition", "closure"], rows),
                );
        }
        Op::Chambers => {
            let space = job.gm_space()?;
            let ch = chambers(space);
            let bound =
                |b: Option<i64>, inf: &str| b.map_or_else(|| inf.to_string(), |x| x.to_string());
            let intervals = ch
                .intervals
                .iter()
                .zip(ch.sample_points())
                .map(|(&(lo, hi), s)| vec![bound(lo, "-inf"), bound(hi, "+inf"), s.to_string()])
                .collect();
            let comps = fixed_components(space)
                .iter()
                .map(|c| {
                    Ok(vec![
                        c.index.to_string(),
                        c.value.to_string(),
                        c.w.to_string(),
                        c.dimension.to_string(),
                        c.eta_plus.to_string(),
                        c.eta_minus.to_string(),
                        c.canonical_weight.to_string(),
                        wall_type(space, c.index)?.name().to_string(),
                    ])
                })
                .collect::<Result<Vec<_>, equivar::Error>>()?;
            report
                .set(
                    "critical_values",
                    Node::list(ch.critical_values.iter().copied()),
                )
                .set("chambers", Node::table(&["lo", "hi", "sample"], intervals))
                .set(
                    "components",
                    Node::table(
                        &[
                            "component",
                            "value",
                            "w",
                            "dim",
                            "eta_plus",
                            "eta_minus",
                            "canonical",
                            "wall",
                        ],
                        comps,
                    ),
                );
        }
        Op::Window => {
            let space = job.gm_space()?;
            let spec = WindowSpec::new(
                p.theta.clone().expect("validated"),
                p.a.clone().expect("validated"),
            );
            let converted;
            let e = match job.complex()? {
                ComplexSpec::Sheaf(e) => e,
                ComplexSpec::Graded(g) => {
                    converted = SheafComplex::from_graded(g);
                    &converted
                }
            };
            let m = window_membership(space, e, &spec)?;
            let intervals = m
                .intervals
                .iter()
                .map(|iv| {
                    vec![
                        iv.component.to_string(),
                        iv.side.to_string(),
                        iv.lo.to_string(),
                        iv.hi.to_string(),
                    ]
                })
                .collect();
            let checks = m
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.component.to_string(),
                        c.degree.to_string(),
                        c.weight.to_string(),
                        c.multiplicity.to_string(),
                        c.inside.to_string(),
                    ]
                })
                .collect();
            report
                .set("a", spec.a.to_string())
                .set("member", m.member)
                .set(
                    "intervals",
                    Node::table(&["component", "side", "lo", "hi"], intervals),
                )
                .set(
                    "weights",
                    Node::table(
                        &["component", "degree", "weight", "multiplicity", "inside"],
                        checks,
                    ),
                );
        }
        Op::Index => {
            let space = job.gm_space()?;
            let f = job.class()?;
            report.set("class", f.to_string());
            match &p.a {
                Some(a) => {
                    let r = semistable_index(space, a, f, order)?;
                    report
                        .set("a", a.to_string())
                        .set("total", r.total)
                        .set("semistable", r.semistable)
                        .set("unstable", index_rows(&r));
                }
                None => {
                    let r = atiyah_bott_index(space, f, order)?;
                    report
                        .set("total", r.total)
                        .set("contributions", index_rows(&r));
                }
            }
            if space.kind() == SpaceKind::Projective {
                report.set("character", sheaf_character(space, f)?.to_string());
            }
        }
        Op::Localize => {
            let space = job.gm_space()?;
            let f = job.class()?;
            let c = fixed_contribution(
                space,
                p.component.expect("validated"),
                f,
                p.side.expect("validated"),
                order,
            )?;
            report
                .set("class", f.to_string())
                .set("component", c.component)
                .set("side", c.side.to_string())
                .set("series", c.series.to_string())
                .set("chi", c.chi);
        }
        Op::Wallcross => {
            let space = job.gm_space()?;
            let f = job.class()?;
            let a1 = p.a1.as_ref().expect("validated");
            let a2 = p.a2.as_ref().expect("validated");
            let wc = wall_crossing_delta(space, a1, a2, f, order)?;
            let rows = wc
                .crossed
                .iter()
                .map(|c| {
                    vec![
                        c.component.to_string(),
                        c.w.to_string(),
                        c.plus.to_string(),
                        c.minus.to_string(),
                    ]
                })
                .collect();
            report
                .set("class", f.to_string())
                .set("a1", wc.a1.to_string())
                .set("a2", wc.a2.to_string())
                .set("delta", wc.delta)
                .set(
                    "crossed",
                    Node::table(&["component", "w", "plus", "minus"], rows),
                );
        }
        Op::Qsym => {
            let q = quasi_symmetric(job.rep()?);
            report.set("quasi_symmetric", q.ok);
            if let Some(line) = q.failing_line {
                report.set("failing_line", Node::list(line));
            }
        }
        Op::Monodromy => {
            let rep = job.rep()?;
            let m = monodromy_matrix(rep, p.path.as_ref().expect("validated"))?;
            report
                .set("path", m.path.to_string())
                .set("source", window_points(&m.source))
                .set("target", window_points(&m.target))
                .set("matrix", matrix(&m.matrix))
                .set("determinant", m.determinant().to_string())
                .set("identity", m.is_identity())
                .set(
                    "note",
                    "windows are the open intervals (theta, theta + eta); genericity is tested as unimodularity",
                );
            if let Some(ell) = p.ell {
                report.set("ell", ell.to_string()).set(
                    "quotient_matrix",
                    matrix(&monodromy_in_quotient_basis(rep, &m, ell)?),
                );
            }
        }
    }
    Ok(report)
}
