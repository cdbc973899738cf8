// Runs the entcorr executable and checks exit codes and outputs.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "entcorr_test_cli";

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args) {
  fs::create_directories(kDir);
  const fs::path out = kDir / "stdout.txt";
  const std::string cmd = std::string(ENTCORR_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                          (kDir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string write(const std::string& name, const std::string& text) {
  fs::create_directories(kDir);
  const fs::path p = kDir / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 1);
  CHECK(run("bogus").code == 1);
  CHECK(run("scan --no-such-flag").code == 1);
  CHECK(run("fcidump").code == 1);  // --input is required
}

TEST_CASE("single point report") {
  const auto r = run("single --basis STO-3G");
  CHECK(r.code == 0);
  CHECK(r.out.find("E_RHF") != std::string::npos);
  CHECK(r.out.find("S_nso") != std::string::npos);
  CHECK(r.out.find("converged") != std::string::npos);
}

TEST_CASE("dissociation scan to stdout and file") {
  const auto r = run("scan --basis STO-3G --rlist 1.0,1.5,2.0");
  CHECK(r.code == 0);
  CHECK(lines(r.out) == 4);
  CHECK(r.out.starts_with("r_bohr,"));

  const std::string csv = (kDir / "scan.csv").string();
  const auto f = run("scan --basis STO-3G --rmin 1 --rmax 2 --steps 3 --output " + csv);
  CHECK(f.code == 0);
  CHECK(f.out.empty());
  CHECK(slurp(csv) == r.out);
}

TEST_CASE("angstrom switch converts distances") {
  const auto bohr = run("scan --basis STO-3G --rlist 1.8897259886");
  const auto ang = run("scan --basis STO-3G --rlist 1 --angstrom");
  CHECK(bohr.code == 0);
  CHECK(ang.code == 0);
  CHECK(bohr.out == ang.out);
}

TEST_CASE("geometry file") {
  const auto xyz = write("h2.xyz", "2\nstretched\nH 0 0 0\nH 0 0 1.2\n");
  const auto r = run("scan --geometry " + xyz + " --basis 6-31G --rlist 1.4,3 --methods RHF,UHF,CISD");
  CHECK(r.code == 0);
  CHECK(lines(r.out) == 3);
  CHECK(run("single --geometry /nonexistent.xyz").code == 1);
  const auto bad = write("bad.xyz", "3\nx\nH 0 0 0\n");
  CHECK(run("single --geometry " + bad).code == 1);
}

TEST_CASE("configuration errors exit with 1") {
  CHECK(run("scan --basis STO-3G").code == 1);  // no distances
  CHECK(run("scan --rlist 2,1").code == 1);
  CHECK(run("scan --rlist 1,2 --rmin 1 --rmax 2 --steps 2").code == 1);
  CHECK(run("scan --rmin 1 --rmax 2").code == 1);
  CHECK(run("scan --rlist 1 --basis cc-pVDZ").code == 1);
  CHECK(run("scan --rlist 1 --methods RHF").code == 1);
  CHECK(run("scan --rlist 1 --max-iter 0").code == 1);
  CHECK(run("fragments --basis STO-3G --rlist 5 --thetalist 360").code == 1);
  CHECK(run("scan --rlist 1 --output /nonexistent/dir/x.csv").code == 1);
}

TEST_CASE("strict mode turns convergence failures into exit 2") {
  CHECK(run("scan --basis STO-3G --rlist 1.4 --max-iter 1").code == 0);
  CHECK(run("scan --basis STO-3G --rlist 1.4 --max-iter 1 --strict").code == 2);
  CHECK(run("scan --basis STO-3G --rlist 1.4 --strict").code == 0);
  CHECK(run("single --basis STO-3G --max-iter 1 --strict").code == 2);
}

TEST_CASE("fragments") {
  const auto r = run("fragments --basis STO-3G --rlist 5,50 --thetalist 0,90");
  CHECK(r.code == 0);
  CHECK(lines(r.out) == 5);
  const auto again = run("fragments --basis STO-3G --rlist 5,50 --thetalist 0,90 --threads 1");
  CHECK(again.out == r.out);
  const auto other = write("h2_long.xyz", "2\nx\nH 0 0 0\nH 1.0 0 0\n");
  CHECK(run("fragments --basis STO-3G --rlist 5 --geometry-b " + other).code == 1);
}

TEST_CASE("FCIDUMP write and ingest") {
  const std::string dump = (kDir / "h2.fcidump").string();
  const auto s = run("single --basis 3-21G --write-fcidump " + dump);
  CHECK(s.code == 0);
  REQUIRE(fs::exists(dump));
  const auto f = run("fcidump --input " + dump);
  CHECK(f.code == 0);
  CHECK(f.out.find("S_nso") != std::string::npos);
  const auto c = run("fcidump --input " + dump + " --methods CISD");
  CHECK(c.code == 0);
  CHECK(c.out == f.out);  // two electrons: CISD is FCI
  CHECK(run("fcidump --input /nonexistent/FCIDUMP").code == 1);
  const auto bad = write("bad.fcidump", "&FCI NORB=4,NELEC=2,MS2=0,&END\n 0.5 5 1 1 1\n");
  CHECK(run("fcidump --input " + bad).code == 1);
}
