//! Text rendering in the shape of the result tables: one row per dimension
//! with orbit counts, factored stabilizer orders with multiplicities
//! (`A (k)`), orientable counts, differential data and the homology group.

use perfect_forms::field::{Int, Rat};
use perfect_forms::homology::factored_int;

use crate::formats::{RunDocument, TableRowDoc, VerificationDoc};

/// `2^7*3` style factorization string.
pub fn factored(factorization: &[(u64, u32)]) -> String {
    if factorization.is_empty() {
        return "1".to_string();
    }
    factorization
        .iter()
        .map(|(p, e)| {
            if *e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Factored form of an integer (for stabilizer orders and divisors).
pub fn factored_of(v: &Int) -> String {
    factored(&factored_int(v))
}

/// Multiset shorthand `A (k)` over already-factored labels.
pub fn with_multiplicity(items: &[(String, usize)]) -> Vec<String> {
    items
        .iter()
        .map(|(label, mult)| format!("{label} ({mult})"))
        .collect()
}

/// Rational printed as the tables print them: `p/q`, or `p` for integers.
pub fn display_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Homology group label `Z^r + (Z_d)^k`, or `0`.
pub fn homology_label(free_rank: usize, torsion: &[(Int, usize)]) -> String {
    let mut parts = Vec::new();
    match free_rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    for (d, m) in torsion {
        if *m == 1 {
            parts.push(format!("Z_{d}"));
        } else {
            parts.push(format!("(Z_{d})^{m}"));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

pub fn render_table(rows: &[TableRowDoc]) -> String {
    let mut out = String::new();
    out.push_str(
        "  n | |Sigma*_n| | |Stab| (mult)                  | |Sigma_n| | Omega | rank | elem div    | H_n\n",
    );
    out.push_str(
        "----+------------+--------------------------------+-----------+-------+------+-------------+--------------------\n",
    );
    for row in rows.iter().rev() {
        out.push_str(&format!(
            " {:>2} | {:>10} | {:<30} | {:>9} | {:>5} | {:>4} | {:<11} | {}\n",
            row.dim,
            row.orbit_count,
            row.stab_orders.join(", "),
            row.orientable_count,
            row.nnz,
            row.rank,
            if row.elementary_divisors.is_empty() {
                "-".to_string()
            } else {
                row.elementary_divisors.join(", ")
            },
            row.homology,
        ));
    }
    out
}

pub fn render_verification(v: &VerificationDoc) -> String {
    let mut out = String::new();
    out.push_str(&format!("chain identity (d.d = 0): {}\n", v.chain_identity));
    if v.mass_applicable {
        out.push_str(&format!(
            "mass formula: total = {} [{}]\n",
            v.mass_total,
            if v.mass_total == "0/1" { "pass" } else { "FAIL" }
        ));
    } else {
        out.push_str(&format!(
            "mass formula: total = {} [n/a for rank 1]\n",
            v.mass_total
        ));
    }
    for (dim, term) in &v.mass_terms {
        out.push_str(&format!("  dim {dim}: {term}\n"));
    }
    out.push_str(&format!(
        "top cycle xi: {} (kernel [{}], weights [{}], stabilizer orders [{}])\n",
        if v.xi_is_cycle { "cycle" } else { "NOT a cycle" },
        v.xi_kernel.join(", "),
        v.xi_weights.join(", "),
        v.xi_stab_orders.join(", "),
    ));
    out
}

pub fn render_census(doc: &RunDocument) -> String {
    let mut out = String::new();
    let Some(census) = &doc.census else {
        return out;
    };
    out.push_str(&format!(
        "perfect forms for D = {}, N = {}: {} classes\n",
        doc.config.disc, doc.config.rank, census.class_count
    ));
    for (i, c) in census.classes.iter().enumerate() {
        out.push_str(&format!(
            "  class {i}: |M| = {} ({} with units), |Stab| = {} = {}\n",
            c.min_vector_classes, c.min_vector_total, c.stab_order, c.stab_order_factored
        ));
    }
    out
}
