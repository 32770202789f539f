use clap::Parser;
use lckspace_tools::Cli;

fn main() {
    let cli = Cli::parse();
    let mut argv: Vec<String> = vec!["lckspace".into()];
    argv.extend(std::env::args().skip(1));
    let report = lckspace_tools::run(&cli, argv);
    if cli.global.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    std::process::exit(report.exit_code());
}
