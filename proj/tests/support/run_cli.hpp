#pragma once

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace divcw::test {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

// Runs the built CLI binary with the given argument string and captures
// stdout (stderr too when combine_stderr is set).
inline CliResult run_cli(const std::string& args, bool combine_stderr = false) {
    std::string command = std::string(DIVCW_CLI_PATH) + " " + args;
    command += combine_stderr ? " 2>&1" : " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for: " + command);
    CliResult result;
    std::array<char, 4096> buffer;
    std::size_t got;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) result.out.append(buffer.data(), got);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

// Writes content to a file under the given path (for test fixtures).
inline void write_file(const std::string& path, const std::string& content) {
    FILE* f = fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    fwrite(content.data(), 1, content.size(), f);
    fclose(f);
}

}  // namespace divcw::test
