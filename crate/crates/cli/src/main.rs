fn main() {
    std::process::exit(fetal_doppler_cli::run(std::env::args_os()));
}
