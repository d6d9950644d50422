//! The reference tables, recomputed.

use eigeninterval::asymptotics::{
    edge_prob_limit, goe_negativity_approx, mp_support, psi_approx, tw_cdf, tw_params, GoeNegativity, TwBeta,
    EDGE_LIMIT_REAL,
};
use eigeninterval::ensembles::{EnsembleSpec, Interval};
use eigeninterval::exact_psi::psi;
use eigeninterval::Result;

use crate::report::{GoeNegativeRow, MpEdgeRow, Probability, Table, TwParamsRow, WishartMidRow};

pub const GOE_NEGATIVE_DIMS: [usize; 6] = [2, 5, 10, 50, 100, 500];
pub const WISHART_MID_DIMS: [usize; 6] = [2, 5, 10, 50, 100, 500];
pub const MP_EDGE_DIMS: [usize; 6] = [10, 20, 50, 100, 200, 500];
/// `p/m` as `(numerator, denominator)`.
pub const MP_EDGE_RATIOS: [(usize, usize); 4] = [(2, 3), (1, 2), (1, 5), (1, 10)];

fn keep(dim: usize, max_dim: Option<usize>) -> bool {
    max_dim.is_none_or(|d| dim <= d)
}

pub fn goe_negative(max_dim: Option<usize>) -> Result<Table> {
    let rows = GOE_NEGATIVE_DIMS
        .into_iter()
        .filter(|&n| keep(n, max_dim))
        .map(|n| {
            let r = psi(&EnsembleSpec::Goe { n }, Interval::new(f64::NEG_INFINITY, 0.0)?)?;
            let approx = |v| Probability::from_log10(goe_negativity_approx(n, v) / std::f64::consts::LN_10);
            Ok(GoeNegativeRow {
                n,
                exact: Probability::from_result(&r),
                converged: r.converged,
                basic: approx(GoeNegativity::Basic),
                corrected: approx(GoeNegativity::Corrected),
            })
        })
        .collect::<Result<_>>()?;
    Ok(Table::GoeNegative { rows })
}

pub fn wishart_mid(max_dim: Option<usize>) -> Result<Table> {
    let rows = WISHART_MID_DIMS
        .into_iter()
        .filter(|&p| keep(p, max_dim))
        .map(|p| {
            let r = psi(&EnsembleSpec::RealWishart { p, m: p }, Interval::new(0.0, p as f64)?)?;
            Ok(WishartMidRow {
                p,
                exact: Probability::from_result(&r),
                converged: r.converged,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Table::WishartMid { rows })
}

pub fn mp_edge_cell(p: usize, ratio: (usize, usize)) -> Result<MpEdgeRow> {
    let m = p * ratio.1 / ratio.0;
    let spec = EnsembleSpec::RealWishart { p, m };
    let iv = mp_support(p, m)?;
    let r = psi(&spec, iv)?;
    Ok(MpEdgeRow {
        p,
        ratio: format!("{}/{}", ratio.0, ratio.1),
        m,
        exact: r.value,
        converged: r.converged,
        approx: psi_approx(&spec, iv)?,
    })
}

pub fn mp_edges(max_dim: Option<usize>) -> Result<Table> {
    let mut rows = Vec::new();
    for p in MP_EDGE_DIMS.into_iter().filter(|&p| keep(p, max_dim)) {
        for ratio in MP_EDGE_RATIOS {
            rows.push(mp_edge_cell(p, ratio)?);
        }
    }
    Ok(Table::MpEdges {
        rows,
        limit: EDGE_LIMIT_REAL,
        limit_surrogate: edge_prob_limit(TwBeta::One),
    })
}

pub fn tw_params_table() -> Table {
    Table::TwParams {
        rows: TwBeta::ALL
            .into_iter()
            .map(|b| TwParamsRow {
                params: tw_params(b),
                cdf_at_zero: tw_cdf(b, 0.0),
            })
            .collect(),
    }
}

pub fn all_converged(t: &Table) -> bool {
    match t {
        Table::GoeNegative { rows } => rows.iter().all(|r| r.converged),
        Table::WishartMid { rows } => rows.iter().all(|r| r.converged),
        Table::MpEdges { rows, .. } => rows.iter().all(|r| r.converged),
        Table::TwParams { .. } => true,
    }
}
