//! Orchestration of the subcommands: resumable census, complex construction,
//! homology tables and the verification report.

use anyhow::{anyhow, bail, Context, Result};

use perfect_forms::cell_complex::{build_complex, summarize, VoronoiComplex};
use perfect_forms::field::Disc;
use perfect_forms::homology::{homology, HomologyResult};
use perfect_forms::isometry::torsion_prime_bound;
use perfect_forms::verification::{
    chain_identity, chain_identity_of, mass_formula, mass_formula_of, xi_cycle_check,
    xi_cycle_check_parts, MassReport, XiReport,
};
use perfect_forms::voronoi::{Census, Explorer};

use crate::config::RunConfig;
use crate::formats::{
    self, census_doc, int_to_string, load_cells, load_checkpoint, save_cells, save_checkpoint,
    LoadedComplex, RunDocument, TableRowDoc, VerificationDoc,
};
use crate::tables;

fn err(e: perfect_forms::Error) -> anyhow::Error {
    anyhow!("{e}")
}

/// Runs (or resumes) the perfect-form walk, checkpointing after every
/// expanded class.
pub fn run_census(cfg: &RunConfig) -> Result<Census> {
    let k = cfg.validate()?;
    let path = cfg.checkpoint_path();
    let mut explorer = if path.exists() {
        let state = load_checkpoint(&path)?;
        if state.disc != cfg.disc || state.rank != cfg.rank {
            bail!(
                "checkpoint {} is for D = {}, N = {}",
                path.display(),
                state.disc,
                state.rank
            );
        }
        Explorer::from_forms(k, cfg.rank, cfg.caps, state.forms, state.processed).map_err(err)?
    } else {
        Explorer::new(k, cfg.rank, cfg.caps).map_err(err)?
    };
    loop {
        let more = explorer.step().map_err(err)?;
        save_checkpoint(&path, k, cfg.rank, explorer.classes(), explorer.processed())?;
        if !more {
            break;
        }
    }
    explorer.into_census().map_err(err)
}

pub struct Analysis {
    pub complex: VoronoiComplex,
    pub homology: HomologyResult,
    pub mass: MassReport,
    pub chain_ok: bool,
    pub xi: XiReport,
}

pub fn analyze(census: &Census) -> Result<Analysis> {
    let complex = build_complex(census).map_err(err)?;
    let chain_ok = chain_identity_of(&complex).is_ok();
    if !chain_ok {
        bail!("chain identity d.d = 0 fails");
    }
    let homology = homology(&complex).map_err(err)?;
    let mass = mass_formula_of(&complex);
    let xi = xi_cycle_check(&complex).map_err(err)?;
    Ok(Analysis {
        complex,
        homology,
        mass,
        chain_ok,
        xi,
    })
}

pub fn table_rows(analysis: &Analysis) -> Vec<TableRowDoc> {
    let complex = &analysis.complex;
    let summaries = summarize(complex);
    summaries
        .iter()
        .map(|s| {
            let h = analysis
                .homology
                .at_dim(s.dim)
                .expect("homology covers all dims");
            TableRowDoc {
                dim: s.dim,
                orbit_count: s.orbit_count,
                stab_orders: tables::with_multiplicity(
                    &s.stab_orders
                        .iter()
                        .map(|(o, m)| (tables::factored_of(o), *m))
                        .collect::<Vec<_>>(),
                ),
                orientable_count: s.orientable_count,
                nnz: s.nnz,
                rank: h.rank_d,
                elementary_divisors: h
                    .divisors_d
                    .iter()
                    .map(|(d, m)| format!("{d} ({m})"))
                    .collect(),
                homology: tables::homology_label(h.free_rank, &h.torsion),
            }
        })
        .collect()
}

pub fn verification_doc(cfg: &RunConfig, mass: &MassReport, chain_ok: bool, xi: &XiReport) -> VerificationDoc {
    let mass_applicable = cfg.rank >= 2;
    let mass_pass = !mass_applicable || mass.passes();
    VerificationDoc {
        chain_identity: if chain_ok { "pass".into() } else { "fail".into() },
        mass_applicable,
        mass_total: formats::rat_to_string(&mass.total),
        mass_terms: mass
            .per_dim
            .iter()
            .map(|(d, _)| {
                (
                    *d,
                    formats::rat_to_string(&mass.signed_term(*d).expect("dim present")),
                )
            })
            .collect(),
        xi_is_cycle: xi.is_cycle,
        xi_kernel: xi.kernel.iter().map(int_to_string).collect(),
        xi_weights: xi.weights.iter().map(int_to_string).collect(),
        xi_stab_orders: xi.stab_orders.iter().map(int_to_string).collect(),
        all_pass: chain_ok && mass_pass && xi.is_cycle,
    }
}

fn base_document(cfg: &RunConfig, k: Disc) -> RunDocument {
    RunDocument {
        config: formats::DocConfig {
            disc: cfg.disc,
            rank: cfg.rank,
        },
        serre_primes: torsion_prime_bound(cfg.rank, k).into_iter().collect(),
        census: None,
        table: None,
        verification: None,
    }
}

fn emit(cfg: &RunConfig, doc: &RunDocument, text: String) -> Result<String> {
    std::fs::create_dir_all(&cfg.out)?;
    std::fs::write(cfg.document_path(), doc.to_json()? + "\n")?;
    Ok(match cfg.format {
        crate::config::OutputFormat::Json => doc.to_json()?,
        crate::config::OutputFormat::Table => text,
    })
}

/// `perfect-forms`: census + checkpoint. Exit status 0 on success.
pub fn cmd_perfect_forms(cfg: &RunConfig) -> Result<String> {
    let k = cfg.validate()?;
    let census = run_census(cfg)?;
    let mut doc = base_document(cfg, k);
    doc.census = Some(census_doc(&census));
    let text = tables::render_census(&doc);
    emit(cfg, &doc, text)
}

/// `cells`: census + complex + cell database; per-dimension census table.
pub fn cmd_cells(cfg: &RunConfig) -> Result<String> {
    let k = cfg.validate()?;
    let census = run_census(cfg)?;
    let analysis = analyze(&census)?;
    save_cells(&cfg.cells_path(), &analysis.complex)?;
    let mut doc = base_document(cfg, k);
    doc.census = Some(census_doc(&census));
    doc.table = Some(table_rows(&analysis));
    let text = format!(
        "{}\n{}cell database: {}\n",
        tables::render_census(&doc),
        tables::render_table(doc.table.as_ref().expect("table set")),
        cfg.cells_path().display()
    );
    emit(cfg, &doc, text)
}

/// `homology`: the full pipeline; errors out when a verification fails.
pub fn cmd_homology(cfg: &RunConfig) -> Result<String> {
    let k = cfg.validate()?;
    let census = run_census(cfg)?;
    let analysis = analyze(&census)?;
    save_cells(&cfg.cells_path(), &analysis.complex)?;
    let mut doc = base_document(cfg, k);
    doc.census = Some(census_doc(&census));
    doc.table = Some(table_rows(&analysis));
    let vdoc = verification_doc(cfg, &analysis.mass, analysis.chain_ok, &analysis.xi);
    let all_pass = vdoc.all_pass;
    doc.verification = Some(vdoc);
    let text = format!(
        "{}\n{}\n{}",
        tables::render_census(&doc),
        tables::render_table(doc.table.as_ref().expect("table set")),
        tables::render_verification(doc.verification.as_ref().expect("verification set")),
    );
    let out = emit(cfg, &doc, text)?;
    if !all_pass {
        bail!("verification failed\n{out}");
    }
    Ok(out)
}

/// `verify`: run the three checks. Prefers the cell database on disk (so
/// that corrupted checkpoints are caught); recomputes when absent.
pub fn cmd_verify(cfg: &RunConfig) -> Result<String> {
    let k = cfg.validate()?;
    let cells_path = cfg.cells_path();
    let (mass, chain_ok, xi) = if cells_path.exists() {
        let loaded = load_cells(&cells_path)?;
        if loaded.disc != cfg.disc || loaded.rank != cfg.rank {
            bail!("cell database is for a different (D, N)");
        }
        verify_loaded(&loaded)?
    } else {
        let census = run_census(cfg)?;
        let analysis = analyze(&census)?;
        (analysis.mass, analysis.chain_ok, analysis.xi)
    };
    let mut doc = base_document(cfg, k);
    let vdoc = verification_doc(cfg, &mass, chain_ok, &xi);
    let all_pass = vdoc.all_pass;
    doc.verification = Some(vdoc);
    let text = tables::render_verification(doc.verification.as_ref().expect("set"));
    let out = emit(cfg, &doc, text)?;
    if !all_pass {
        bail!("verification failed\n{out}");
    }
    Ok(out)
}

pub fn verify_loaded(
    loaded: &LoadedComplex,
) -> Result<(MassReport, bool, XiReport)> {
    let mass = mass_formula(&loaded.stab_orders);
    let chain_ok = chain_identity(&loaded.differentials).is_ok();
    let top = loaded.top_dim();
    let xi = xi_cycle_check_parts(&loaded.differentials[top], &loaded.orientable_orders[top])
        .map_err(err)?;
    Ok((mass, chain_ok, xi))
}

/// Installs the rayon pool sized by `--workers` and runs `f` inside it.
pub fn with_workers<T>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T>
where
    T: Send,
{
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("building worker pool")?;
    Ok(pool.install(f))
}
