#include "refcover/io.hpp"

#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "refcover/common.hpp"

namespace refcover {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw data_error("error reading " + path);
  return buf.str();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::string content = read_file(path);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string::npos) {
      if (pos < content.size()) lines.push_back(content.substr(pos));
      break;
    }
    std::string line = content.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = nl + 1;
  }
  return lines;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot create " + tmp);
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw data_error("error writing " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    int err = errno;
    std::remove(tmp.c_str());
    throw data_error("cannot move " + tmp + " to " + path + ": " +
                     std::strerror(err));
  }
}

std::vector<std::vector<std::string>> read_tsv(const std::string& path,
                                               std::size_t min_cols) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> cols;
    std::size_t pos = 0;
    for (;;) {
      std::size_t tab = lines[i].find('\t', pos);
      if (tab == std::string::npos) {
        cols.push_back(lines[i].substr(pos));
        break;
      }
      cols.push_back(lines[i].substr(pos, tab - pos));
      pos = tab + 1;
    }
    if (cols.size() < min_cols)
      throw data_error(path + ":" + std::to_string(i + 1) + ": expected " +
                       std::to_string(min_cols) + " columns, got " +
                       std::to_string(cols.size()));
    rows.push_back(std::move(cols));
  }
  return rows;
}

}  // namespace refcover
