use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = zlab::cli::init_threads().and_then(|()| zlab::cli::run(std::env::args_os(), &mut out));
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message().trim_end());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
