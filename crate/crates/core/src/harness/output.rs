//! CSV and JSON writers. Floats use Rust's shortest round-trip form.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::analysis::{DiagnosticsSeries, NKind};
use crate::error::Result;
use crate::profile::{h_eval, ShockProfile};

pub const DIAGNOSTICS_HEADER: &str =
    "t,sup_error,N,mass,max_slope,n_kind,phi_weight,N_bracket,N_over_bracket,\
term_phi_xixi,term_phi_xi,term_phi,x0,clip_total,boundary_flux_total";

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// `t,x,u` rows, one block per snapshot.
pub fn write_snapshots_csv(path: &Path, x: &[f64], snapshots: &[(f64, Vec<f64>)]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "t,x,u")?;
    for (t, u) in snapshots {
        for (xj, uj) in x.iter().zip(u) {
            writeln!(w, "{t},{xj},{uj}")?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_diagnostics_csv(path: &Path, series: &DiagnosticsSeries) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{DIAGNOSTICS_HEADER}")?;
    for r in series.records() {
        let ratio =
            r.n.equivalence_ratio()
                .map_or_else(String::new, |q| q.to_string());
        writeln!(
            w,
            "{},{},{},{},{},{:?},{},{},{},{},{},{},{},{},{}",
            r.t,
            r.sup_error,
            r.n.value,
            r.mass,
            r.max_slope,
            r.n.kind,
            match r.n.kind {
                NKind::N1 => "U^-2m",
                NKind::N2 => "w",
            },
            r.n.bracket_value,
            ratio,
            r.n.terms[0],
            r.n.terms[1],
            r.n.terms[2],
            r.x0,
            r.clip_total,
            r.boundary_flux_total
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Table nodes as `xi,U,U_xi` with the slope from the ODE right-hand side.
pub fn write_profile_csv(path: &Path, profile: &ShockProfile) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "xi,U,U_xi")?;
    let s = profile.speed();
    for (xi, u) in profile.nodes() {
        writeln!(w, "{xi},{u},{}", h_eval(profile.model(), s, u))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
