use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use qwalk_core::{
    cp_walk, global_trajectory, kernel_walk, period_kernel, prompt_trajectory, SiteDistribution, WalkConfig,
};

use crate::args::Scheme;
use crate::error::CliError;

/// Distributions for steps `0..=max_step` under the given scheme.
pub fn trajectory(
    config: &WalkConfig,
    scheme: Scheme,
    m: usize,
    max_step: usize,
) -> Result<Vec<SiteDistribution>, CliError> {
    Ok(match scheme {
        Scheme::Prompt => prompt_trajectory(config, max_step),
        Scheme::Global => global_trajectory(config, max_step),
        Scheme::Kernel => kernel_walk(&period_kernel(config, m)?, max_step, &SiteDistribution::delta(0))?,
        Scheme::Cp => cp_walk(config, m, max_step)?
            .iter()
            .map(|rho| rho.diagonal())
            .collect::<Result<_, _>>()?,
    })
}

/// Seventeen significant digits, shared by every CSV column and SVG data attribute.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_output(path: Option<&Path>, body: &str) -> Result<(), CliError> {
    match path {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(body.as_bytes())?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(body.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}
