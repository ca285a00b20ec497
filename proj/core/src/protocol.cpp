#include "packbench/protocol.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>
#include <sstream>
#include <thread>

#include "packbench/codec.hpp"
#include "packbench/error.hpp"

extern char** environ;

namespace packbench {
namespace {

constexpr std::size_t kMaxStdout = 64u << 20;
constexpr std::size_t kMaxStderrExcerpt = 4096;

class Fd {
public:
    Fd() = default;
    explicit Fd(int fd) : fd_(fd) {}
    Fd(const Fd&) = delete;
    Fd& operator=(const Fd&) = delete;
    Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
    Fd& operator=(Fd&& o) noexcept {
        if (this != &o) {
            reset();
            fd_ = std::exchange(o.fd_, -1);
        }
        return *this;
    }
    ~Fd() { reset(); }

    int get() const { return fd_; }
    explicit operator bool() const { return fd_ >= 0; }
    void reset() {
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
    }

private:
    int fd_ = -1;
};

struct Pipe {
    Fd read, write;
};

Pipe make_pipe() {
    int fds[2];
    if (::pipe2(fds, O_CLOEXEC) != 0) throw Error(ErrorCode::kIo, std::string("pipe2: ") + std::strerror(errno));
    return {Fd(fds[0]), Fd(fds[1])};
}

void set_nonblocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK); }

void ignore_sigpipe() {
    static std::once_flag once;
    std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

struct RawRun {
    bool spawned = false;
    bool timed_out = false;
    int status = 0;
    std::string out;
    std::string err;
    bool out_truncated = false;
    double wall = 0.0;
};

// Kills every process left in the candidate's group and reaps the leader.
void reap_group(pid_t pid, bool leader_reaped, int* status) {
    ::kill(-pid, SIGKILL);
    if (!leader_reaped) {
        while (::waitpid(pid, status, 0) < 0 && errno == EINTR) {
        }
    }
}

RawRun spawn_and_collect(const CandidateSpec& spec, const std::string& input) {
    RawRun run;
    if (spec.launch.empty()) return run;

    Pipe in = make_pipe(), out = make_pipe(), err = make_pipe();

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in.read.get(), STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out.write.get(), STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&actions, err.write.get(), STDERR_FILENO);
    if (!spec.workdir.empty()) posix_spawn_file_actions_addchdir_np(&actions, spec.workdir.c_str());

    posix_spawnattr_t attr;
    posix_spawnattr_init(&attr);
    sigset_t defaults;
    sigemptyset(&defaults);
    sigaddset(&defaults, SIGPIPE);
    posix_spawnattr_setsigdefault(&attr, &defaults);
    posix_spawnattr_setpgroup(&attr, 0);
    posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP | POSIX_SPAWN_SETSIGDEF);

    std::vector<char*> argv;
    for (const auto& a : spec.launch) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);

    const auto start = std::chrono::steady_clock::now();
    pid_t pid = -1;
    const int rc = ::posix_spawnp(&pid, argv[0], &actions, &attr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    posix_spawnattr_destroy(&attr);
    in.read.reset();
    out.write.reset();
    err.write.reset();
    if (rc != 0) {
        run.status = 127 << 8;
        run.err = std::string("spawn failed: ") + std::strerror(rc);
        run.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return run;
    }
    run.spawned = true;

    set_nonblocking(in.write.get());
    set_nonblocking(out.read.get());
    set_nonblocking(err.read.get());

    const auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                      std::chrono::duration<double>(spec.timeout_seconds));
    std::size_t written = 0;
    if (input.empty()) in.write.reset();
    bool leader_reaped = false;
    char buf[65536];

    while (true) {
        if (!leader_reaped) {
            const pid_t w = ::waitpid(pid, &run.status, WNOHANG);
            if (w == pid) leader_reaped = true;
        }
        if (leader_reaped && !out.read && !err.read) break;

        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            run.timed_out = true;
            break;
        }

        std::vector<pollfd> fds;
        if (in.write) fds.push_back({in.write.get(), POLLOUT, 0});
        if (out.read) fds.push_back({out.read.get(), POLLIN, 0});
        if (err.read) fds.push_back({err.read.get(), POLLIN, 0});
        const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        // Short slices keep the child-exit check responsive when grandchildren
        // hold the pipes open.
        const int slice = static_cast<int>(std::min<long long>(remaining + 1, leader_reaped ? 5 : 20));
        if (fds.empty()) {
            std::this_thread::sleep_for(std::chrono::milliseconds(slice));
        } else if (::poll(fds.data(), fds.size(), slice) < 0 && errno != EINTR) {
            break;
        }

        bool progressed = false;
        for (const auto& p : fds) {
            if (!p.revents) continue;
            progressed = true;
            if (in.write && p.fd == in.write.get()) {
                const ssize_t n = ::write(p.fd, input.data() + written, input.size() - written);
                if (n > 0) written += static_cast<std::size_t>(n);
                if (n < 0 && errno != EAGAIN && errno != EINTR) in.write.reset();
                if (written == input.size()) in.write.reset();
            } else if (out.read && p.fd == out.read.get()) {
                const ssize_t n = ::read(p.fd, buf, sizeof buf);
                if (n > 0) {
                    if (run.out.size() + static_cast<std::size_t>(n) > kMaxStdout) {
                        run.out_truncated = true;
                        out.read.reset();
                    } else {
                        run.out.append(buf, static_cast<std::size_t>(n));
                    }
                } else if (n == 0 || (errno != EAGAIN && errno != EINTR)) {
                    out.read.reset();
                }
            } else if (err.read && p.fd == err.read.get()) {
                const ssize_t n = ::read(p.fd, buf, sizeof buf);
                if (n > 0) {
                    if (run.err.size() < kMaxStderrExcerpt)
                        run.err.append(buf, std::min<std::size_t>(static_cast<std::size_t>(n),
                                                                  kMaxStderrExcerpt - run.err.size()));
                } else if (n == 0 || (errno != EAGAIN && errno != EINTR)) {
                    err.read.reset();
                }
            }
        }

        // The leader is gone but something in its group may still hold the
        // pipes; stop at the first quiet round, whatever arrived is the response.
        if (leader_reaped && !progressed) break;
    }

    reap_group(pid, leader_reaped, &run.status);
    run.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
    return s;
}

}  // namespace

std::string verdict_name(const Verdict& v) {
    struct {
        std::string operator()(const verdict::Valid&) const { return "Valid"; }
        std::string operator()(const verdict::Invalid&) const { return "Invalid"; }
        std::string operator()(const verdict::Crashed&) const { return "Crashed"; }
        std::string operator()(const verdict::TimedOut&) const { return "TimedOut"; }
        std::string operator()(const verdict::Malformed&) const { return "Malformed"; }
    } visitor;
    return std::visit(visitor, v);
}

std::string describe(const Verdict& v) {
    std::ostringstream ss;
    ss << verdict_name(v);
    if (const auto* inv = std::get_if<verdict::Invalid>(&v)) {
        ss << ": " << inv->violations.size() << " violation(s)";
        if (!inv->violations.empty())
            ss << ", first " << to_string(inv->violations.front().kind) << " (" << inv->violations.front().detail
               << ")";
    } else if (const auto* c = std::get_if<verdict::Crashed>(&v)) {
        if (c->signal) ss << ": signal " << c->signal;
        else ss << ": exit " << c->exit_code;
        if (!c->stderr_excerpt.empty()) ss << ": " << trim(c->stderr_excerpt.substr(0, 200));
    } else if (const auto* m = std::get_if<verdict::Malformed>(&v)) {
        ss << ": " << m->detail;
    }
    return ss.str();
}

EvalOutcome run_candidate(const CandidateSpec& spec, const Instance& instance, std::size_t instance_index) {
    ignore_sigpipe();
    EvalOutcome outcome;
    outcome.candidate_id = spec.id;
    outcome.instance_index = instance_index;

    RawRun run;
    try {
        run = spawn_and_collect(spec, encode_instance(instance) + "\n");
    } catch (const Error& e) {
        outcome.verdict = verdict::Crashed{-1, 0, e.what()};
        return outcome;
    }
    outcome.wall_time = run.wall;

    if (run.timed_out) {
        outcome.verdict = verdict::TimedOut{};
        return outcome;
    }
    const bool clean_exit = run.spawned && WIFEXITED(run.status) && WEXITSTATUS(run.status) == 0;
    auto crashed = [&] {
        verdict::Crashed c;
        if (WIFSIGNALED(run.status)) c.signal = WTERMSIG(run.status);
        else c.exit_code = WIFEXITED(run.status) ? WEXITSTATUS(run.status) : -1;
        if (!run.spawned) c.exit_code = 127;
        c.stderr_excerpt = run.err;
        return c;
    };

    if (run.out_truncated) {
        outcome.verdict = verdict::Malformed{"output exceeds " + std::to_string(kMaxStdout) + " bytes"};
        return outcome;
    }

    Solution solution;
    try {
        solution = decode_solution(run.out, instance);
    } catch (const Error& e) {
        if (!clean_exit) outcome.verdict = crashed();
        else outcome.verdict = verdict::Malformed{std::string(to_string(e.code())) + ": " + e.what()};
        return outcome;
    }

    // The output is the contract: a parseable response counts even after a
    // nonzero exit.
    auto violations = validate(instance, solution);
    if (!violations.empty()) {
        outcome.verdict = verdict::Invalid{std::move(violations)};
        return outcome;
    }
    outcome.verdict = verdict::Valid{score_solution(instance, solution, run.wall),
                                     per_bin_utilization(instance, solution)};
    return outcome;
}

DatasetEvaluation summarize(std::vector<EvalOutcome> outcomes) {
    DatasetEvaluation eval;
    std::vector<Score> scores;
    for (const auto& o : outcomes) {
        if (const auto* v = std::get_if<verdict::Valid>(&o.verdict)) {
            scores.push_back(v->score);
        } else {
            eval.reasons.push_back("instance " + std::to_string(o.instance_index) + ": " + describe(o.verdict));
        }
    }
    if (eval.reasons.empty() && !outcomes.empty()) eval.aggregate = aggregate(scores);
    if (outcomes.empty()) eval.reasons.push_back("no instances evaluated");
    eval.outcomes = std::move(outcomes);
    return eval;
}

DatasetEvaluation evaluate_on_dataset(const CandidateSpec& spec, const Dataset& dataset, std::size_t jobs) {
    std::vector<EvalOutcome> outcomes(dataset.instances.size());
    parallel_for(dataset.instances.size(), jobs,
                 [&](std::size_t i) { outcomes[i] = run_candidate(spec, dataset.instances[i], i); });
    return summarize(std::move(outcomes));
}

std::size_t default_jobs() {
    const auto n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

}  // namespace packbench
