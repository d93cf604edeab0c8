use clap::Parser;
use kdist_cli::{exit_code, run, Cli};

fn main() {
    let cli = Cli::parse();
    let outcome = run(&cli);
    match &outcome {
        Ok(report) => {
            for v in &report.verdicts {
                println!("{} {} = {} ({})", if v.pass { "PASS" } else { "FAIL" }, v.name, v.value, v.threshold);
            }
            println!("{}: {}", report.command, if report.pass { "pass" } else { "threshold failure" });
        }
        Err(e) => eprintln!("error: {e:#}"),
    }
    std::process::exit(exit_code(&outcome));
}
