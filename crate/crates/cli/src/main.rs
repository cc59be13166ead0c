use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use isobenefit_core::io::Colormap;

mod commands;

/// Isobenefit fields, contours and scenario comparisons.
///
/// Every subcommand prints a single line of JSON on standard output.
/// Exit status: 0 success, 1 invalid input, 2 file system error.
#[derive(Debug, Parser)]
#[command(name = "isobenefit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldFormat {
    Csv,
    Asciigrid,
    Ppm,
}

impl FieldFormat {
    fn extension(self) -> &'static str {
        match self {
            FieldFormat::Csv => "csv",
            FieldFormat::Asciigrid => "asc",
            FieldFormat::Ppm => "ppm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ColormapArg {
    Grayscale,
    Viridis,
}

impl From<ColormapArg> for Colormap {
    fn from(c: ColormapArg) -> Self {
        match c {
            ColormapArg::Grayscale => Colormap::Grayscale,
            ColormapArg::Viridis => Colormap::Viridis,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the benefit field and write it to a file.
    Field {
        scenario: PathBuf,
        #[arg(long = "out", value_enum)]
        format: FieldFormat,
        /// Output file; defaults to `<scenario stem>.<ext>` in the working directory.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Multiply by the scenario's population density.
        #[arg(long)]
        weighted: bool,
        #[arg(long, value_enum, default_value = "grayscale")]
        colormap: ColormapArg,
    },
    /// Extract isobenefit lines as GeoJSON.
    Contours {
        scenario: PathBuf,
        /// Comma separated contour levels.
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true,
              conflicts_with = "auto", required_unless_present = "auto")]
        levels: Option<Vec<f64>>,
        /// Number of equally spaced levels strictly inside the field range.
        #[arg(long)]
        auto: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two scenarios on the same grid and mobility.
    Compare {
        before: PathBuf,
        after: PathBuf,
        #[arg(long, default_value_t = 10)]
        bins: usize,
        /// Directory receiving the sorted profiles of both fields.
        #[arg(long, default_value = ".")]
        profile_dir: PathBuf,
    },
    /// Uniformity coefficient and companion statistics.
    Uniformity {
        scenario: PathBuf,
        /// Drop disamenities (A < 0) before computing the field.
        #[arg(long)]
        amenities_only: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Field {
            scenario,
            format,
            output,
            weighted,
            colormap,
        } => commands::field(&scenario, format, output, weighted, colormap.into()),
        Command::Contours {
            scenario,
            levels,
            auto,
            out,
        } => commands::contours(&scenario, levels, auto, &out),
        Command::Compare {
            before,
            after,
            bins,
            profile_dir,
        } => commands::compare(&before, &after, bins, &profile_dir),
        Command::Uniformity {
            scenario,
            amenities_only,
        } => commands::uniformity(&scenario, amenities_only),
    };
    match result {
        Ok(line) => {
            println!("{line}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
