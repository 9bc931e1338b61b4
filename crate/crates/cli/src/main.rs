use clap::Parser;
use magnetomech_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, files)) => {
            for line in &report.summary {
                println!("{line}");
            }
            for f in &files {
                println!("wrote {}", f.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
