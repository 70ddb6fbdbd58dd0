fn main() {
    let stdout = std::io::stdout();
    if let Err(e) = simparr::driver::cli::run(std::env::args_os(), &mut stdout.lock()) {
        if let Some(ce) = e.downcast_ref::<clap::Error>() {
            ce.exit();
        }
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
