use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    match toricfan_cli::run(&args, &mut std::io::stdin()) {
        Ok((report, code)) => {
            print!("{}", report.to_json());
            ExitCode::from(code as u8)
        }
        Err(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
    }
}
