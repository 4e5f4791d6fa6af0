// Copyright 2026 The cobs authors
// Licensed under the Apache License, Version 2.0
#include "cobs/cli.hpp"

int main(int argc, char** argv) {
    return cobs::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
