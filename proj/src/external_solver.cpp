#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "coordsynth/sat.hpp"

namespace coordsynth::sat {

namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        std::string pattern = (fs::temp_directory_path() / "coordsynth-XXXXXX").string();
        if (!::mkdtemp(pattern.data())) throw Error("cannot create temporary directory: " + std::string(std::strerror(errno)));
        path_ = pattern;
    }
    ~TempDir() {
        std::error_code ec;
        if (!keep_) fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const { return path_; }
    void keep() { keep_ = true; }

private:
    fs::path path_;
    bool keep_ = false;
};

struct ChildOutput {
    std::string out;
    bool timed_out = false;
    int exit_status = 0;
};

ChildOutput run_child(const std::string& program, const std::string& arg,
                      std::optional<std::chrono::seconds> timeout) {
    int pipefd[2];
    if (::pipe(pipefd) != 0) throw Error("pipe failed: " + std::string(std::strerror(errno)));
    pid_t pid = ::fork();
    if (pid < 0) {
        ::close(pipefd[0]);
        ::close(pipefd[1]);
        throw Error("fork failed: " + std::string(std::strerror(errno)));
    }
    if (pid == 0) {
        ::dup2(pipefd[1], STDOUT_FILENO);
        int devnull = ::open("/dev/null", O_WRONLY);
        if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
        ::close(pipefd[0]);
        ::close(pipefd[1]);
        ::execl(program.c_str(), program.c_str(), arg.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::close(pipefd[1]);

    ChildOutput result;
    auto start = std::chrono::steady_clock::now();
    char buf[65536];
    for (;;) {
        int wait_ms = -1;
        if (timeout) {
            auto left = *timeout - (std::chrono::steady_clock::now() - start);
            if (left <= std::chrono::steady_clock::duration::zero()) {
                result.timed_out = true;
                break;
            }
            wait_ms = static_cast<int>(std::chrono::duration_cast<std::chrono::milliseconds>(left).count()) + 1;
        }
        pollfd p{pipefd[0], POLLIN, 0};
        int rc = ::poll(&p, 1, wait_ms);
        if (rc < 0 && errno == EINTR) continue;
        if (rc == 0) continue;
        ssize_t n = ::read(pipefd[0], buf, sizeof buf);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) break;
        result.out.append(buf, static_cast<std::size_t>(n));
    }
    ::close(pipefd[0]);
    if (result.timed_out) ::kill(pid, SIGKILL);
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    result.exit_status = status;
    if (!result.timed_out && WIFEXITED(status) && WEXITSTATUS(status) == 127 && result.out.empty())
        throw Error("cannot execute solver '" + program + "'");
    return result;
}

}  // namespace

Result solve_external(const Cnf& cnf, const ExternalOptions& opts) {
    if (opts.solver_path.empty()) throw Error("no external solver configured");
    if (::access(opts.solver_path.c_str(), X_OK) != 0) throw Error("solver '" + opts.solver_path + "' is not executable");

    std::optional<TempDir> temp;
    fs::path dir;
    if (opts.work_dir.empty()) {
        temp.emplace();
        if (opts.keep) temp->keep();
        dir = temp->path();
    } else {
        dir = opts.work_dir;
        fs::create_directories(dir);
    }
    fs::path instance = dir / (opts.file_stem + ".cnf");
    {
        std::ofstream f(instance, std::ios::binary);
        if (!f) throw Error("cannot write " + instance.string());
        f << cnf.dimacs();
    }
    ChildOutput child = run_child(opts.solver_path, instance.string(), opts.timeout);
    if (opts.keep) {
        std::ofstream f(dir / (opts.file_stem + ".out"), std::ios::binary);
        f << child.out;
    } else if (!opts.work_dir.empty()) {
        std::error_code ec;
        fs::remove(instance, ec);
    }
    if (child.timed_out) return Result{};
    Result r = parse_competition_output(child.out, cnf.num_vars());
    return r;
}

}  // namespace coordsynth::sat
