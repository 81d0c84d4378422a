use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let budget = std::env::var("CERTKERNEL_BUDGET").ok();
    let code = certkernel_cli::run(
        std::env::args_os(),
        budget.as_deref(),
        &mut io::stdin().lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
