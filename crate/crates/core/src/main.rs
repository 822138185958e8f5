fn main() {
    std::process::exit(convo_topics::cli::main_from_env());
}
