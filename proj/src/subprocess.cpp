#include "maskattack/subprocess.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>

#include "maskattack/errors.hpp"

namespace maskattack::detail {

std::string run_command_capture(const std::vector<std::string>& argv) {
  if (argv.empty()) throw ConfigError("empty argv");
  int pipefd[2];
  if (pipe(pipefd) != 0) throw TranscriberError("pipe() failed");

  pid_t pid = fork();
  if (pid < 0) {
    close(pipefd[0]);
    close(pipefd[1]);
    throw TranscriberError("fork() failed");
  }
  if (pid == 0) {
    dup2(pipefd[1], STDOUT_FILENO);
    close(pipefd[0]);
    close(pipefd[1]);
    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const std::string& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());
    _exit(127);
  }

  close(pipefd[1]);
  std::string output;
  char buf[4096];
  ssize_t got;
  while ((got = read(pipefd[0], buf, sizeof(buf))) > 0) {
    output.append(buf, static_cast<std::size_t>(got));
  }
  close(pipefd[0]);

  int status = 0;
  waitpid(pid, &status, 0);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw TranscriberError("command '" + argv[0] + "' exited with status " +
                           std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1));
  }
  return output;
}

TempWav::TempWav(const AudioBuffer& audio) {
  char tmpl[] = "/tmp/maskattack_XXXXXX.wav";
  int fd = mkstemps(tmpl, 4);
  if (fd < 0) throw TranscriberError("mkstemps failed");
  close(fd);
  path_ = tmpl;
  write_wav(audio, path_);
}

TempWav::~TempWav() { unlink(path_.c_str()); }

}  // namespace maskattack::detail
