#include "oracles.hpp"

#include <hsbc/app/cli.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

using namespace hsbc;
using namespace hsbc::app;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::size_t column(const std::vector<std::string> &header, const std::string &name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("missing column " + name);
    return static_cast<std::size_t>(it - header.begin());
}

const std::filesystem::path data_dir = HSBC_DEFAULT_DATA_DIR;

} // namespace

TEST(CliTables, WaterColumnsMatchReference) {
    const auto r = run({"tables", "--solvent", "W", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 10u);
    const auto &h = rows.front();
    const auto ref = load_reference(data_dir / "reference_W.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto &ion = rows[i][column(h, "ion")];
        for (const auto &[col, q] : {std::pair{"dG_born", Quantity::dG_born}, std::pair{"dG_msa", Quantity::dG_msa},
                                     std::pair{"dS_born", Quantity::dS_born}, std::pair{"dS_msa", Quantity::dS_msa},
                                     std::pair{"dG_expt", Quantity::dG_expt}})
            EXPECT_NEAR(std::stod(rows[i][column(h, col)]), *ref.value(ion, "W", q), 1.0) << ion << " " << col;
    }
}

TEST(CliTables, AcetonitrileBornAndMarkdown) {
    const auto r = run({"tables", "--solvent", "AN", "--ions", "Li+", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1][column(rows[0], "dG_born")], "-768");
    const auto md = run({"tables", "--solvent", "AN", "--ions", "Li+,Cl-", "--format", "markdown"});
    ASSERT_EQ(md.code, 0);
    EXPECT_NE(md.out.find("| Li+ |"), std::string::npos);
    EXPECT_NE(md.out.find("| Cl- |"), std::string::npos);
    EXPECT_NE(md.out.find("alpha(T) = "), std::string::npos);
}

TEST(CliTables, JsonAndDeterminism) {
    const auto a = run({"--format", "json", "tables"});
    ASSERT_EQ(a.code, 0) << a.err;
    const auto j = nlohmann::json::parse(a.out);
    ASSERT_EQ(j.at("tables").size(), 5u);
    for (const auto &t : j.at("tables")) EXPECT_EQ(t.at("rows").size(), 9u);
    EXPECT_EQ(j["tables"][0]["rows"][0]["dG"]["born"].get<int>(), -779);
    EXPECT_EQ(run({"--format", "json", "tables"}).out, a.out);
    EXPECT_EQ(run({"tables"}).out, run({"tables"}).out);
}

TEST(CliTables, FluorideNotReportedInNonAqueousSolvents) {
    const auto r = run({"tables", "--solvent", "MeOH", "--ions", "F-"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    EXPECT_EQ(rows[1][column(rows[0], "dG_expt")], "N/R");
}

TEST(CliTables, MissingDataDirectoryDropsExpt) {
    const auto r = run({"--data-dir", "/nonexistent/hsbc", "tables", "--solvent", "W"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("warning"), std::string::npos);
    const auto rows = parse_csv(r.out);
    EXPECT_EQ(std::find(rows[0].begin(), rows[0].end(), "dG_expt"), rows[0].end());
    EXPECT_EQ(rows.size(), 10u);
}

TEST(CliAlpha, ExplicitAndParamsAreExclusive) {
    const auto r = run({"--params", (data_dir / "params_published.json").string(), "tables", "--alpha", "0.7"});
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.err.find("mutually exclusive"), std::string::npos);
    EXPECT_EQ(run({"tables", "--alpha", "-1"}).code, 1);
    EXPECT_EQ(run({"--params", (data_dir / "params_published.json").string(), "tables"}).code, 0);
}

TEST(CliFit, WaterAndDmf) {
    const auto r = run({"--format", "json", "fit", "--solvent", "W,DMF"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 2u);
    EXPECT_NEAR(j[0]["a1"].get<double>(), 0.670476, 0.05 * 0.670476);
    EXPECT_NEAR(j[1]["a1"].get<double>(), 1.341465, 0.05 * 1.341465);
    EXPECT_GE(j[0]["r_squared"].get<double>(), 0.99);
}

TEST(CliFit, SingleTemperatureAndParamFile) {
    const auto dir = oracle::scratch_dir("cli_fit");
    const auto file = (dir / "w25.json").string();
    const auto r = run({"--out", file, "fit", "--solvent", "W", "--temps", "25"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("notice"), std::string::npos);
    const auto set = load_params(file, "W");
    EXPECT_EQ(set.a2, 0.0);
    EXPECT_FALSE(set.r_squared);
    EXPECT_NEAR(set.a1, 0.685195, 0.05 * 0.685195);
    const auto t = run({"--params", file, "tables", "--solvent", "W", "--ions", "Li+"});
    EXPECT_EQ(t.code, 0) << t.err;
}

TEST(CliSweep, RowsAndSecantEntropy) {
    const auto r = run({"sweep", "--solvent", "W", "--ions", "Li+", "--models", "MSA", "--tmin", "0", "--tmax", "20"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 6u);
    const auto &h = rows[0];
    const auto g = column(h, "dG_kJ_mol"), s = column(h, "dS_J_mol_K");
    for (std::size_t i = 2; i + 1 < rows.size(); ++i) {
        const double secant = -1000.0 * (std::stod(rows[i + 1][g]) - std::stod(rows[i - 1][g])) / 10.0;
        EXPECT_NEAR(std::stod(rows[i][s]), secant, 0.01 * std::abs(secant));
    }
}

TEST(CliSweep, ClipsToValidRange) {
    const auto r = run({"sweep", "--solvent", "F", "--ions", "Na+", "--models", "Born", "--tmin", "10", "--step", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("clipped"), std::string::npos);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 9u);
    EXPECT_EQ(std::stod(rows[1][column(rows[0], "T_C")]), 18.0);
    EXPECT_NE(run({"sweep", "--models", "Debye"}).code, 0);
}

TEST(CliFigdata, AlphaSeriesAndEmptyList) {
    const auto empty = run({"figdata", "--kind", "alpha", "--solvents", ""});
    ASSERT_EQ(empty.code, 0) << empty.err;
    EXPECT_EQ(empty.out, "solvent,T_C,alpha,alpha_line,a1,a2,r_squared\n");
    const auto all = run({"figdata", "--kind", "alpha"});
    ASSERT_EQ(all.code, 0);
    EXPECT_EQ(parse_csv(all.out).size(), 26u);
}

TEST(CliFigdata, TwoCurveSets) {
    const auto r = run({"figdata", "--kind", "h", "--solvents", "W,AN", "--temps", "20,25", "--r-max", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 1u + 4u * 81u);
    const auto &h = rows[0];
    EXPECT_EQ(h, (std::vector<std::string>{"solvent", "T_C", "R", "abs_E_n", "h_exact", "h_model"}));
    EXPECT_EQ(rows[1][0], "W");
    EXPECT_EQ(rows.back()[0], "AN");
    EXPECT_EQ(std::stod(rows.back()[column(h, "T_C")]), 25.0);
    EXPECT_NE(run({"figdata", "--kind", "h", "--solvents", "AN", "--temps", "75"}).code, 0);
}

TEST(CliBem, CentredIonDemo) {
    const auto r = run({"bem", "--icosphere", "0.88", "--subdivisions", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_LE(j.at("relative_deviation").get<double>(), 0.015);
    EXPECT_EQ(j.at("mode"), "nonlinear");
    EXPECT_EQ(j.at("alpha_source"), "fit");
    EXPECT_EQ(j.at("panels").get<int>(), 1280);

    const auto zero = nlohmann::json::parse(run({"bem", "--icosphere", "1.2", "--subdivisions", "2", "--alpha", "0"}).out);
    const auto lin = nlohmann::json::parse(run({"bem", "--icosphere", "1.2", "--subdivisions", "2", "--linear"}).out);
    EXPECT_EQ(zero.at("energy_kJ_mol").get<double>(), lin.at("energy_kJ_mol").get<double>());
    EXPECT_LE(lin.at("relative_deviation").get<double>(), 0.01);
}

TEST(CliBem, MeshFileChargesAndSigmaOutput) {
    const auto dir = oracle::scratch_dir("cli_bem");
    {
        std::ofstream off(dir / "s.off");
        bem::write_off(bem::icosphere(2.0, 2), off);
    }
    oracle::write_file(dir / "q.txt", "0 0 0.5 1\n0 0 -0.5 -1\n");
    const auto r = run({"bem", "--mesh", (dir / "s.off").string(), "--charges", (dir / "q.txt").string(), "--eps-out",
                        "80", "--linear", "--sigma-out", (dir / "sigma.csv").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_LT(j.at("energy_kJ_mol").get<double>(), 0.0);
    EXPECT_FALSE(j.contains("analytic_kJ_mol"));
    std::ifstream sigma(dir / "sigma.csv");
    std::string head;
    std::getline(sigma, head);
    EXPECT_EQ(head, "panel,x,y,z,nx,ny,nz,area,sigma,E_n");
}

TEST(CliBem, Errors) {
    const auto dir = oracle::scratch_dir("cli_bem_bad");
    oracle::write_file(dir / "bad.off", "OFF\n3 1 0\n0 0 0\n1 0 0\n3 0 1 2\n");
    oracle::write_file(dir / "q.txt", "0 0 0 1\n");
    const auto r = run({"bem", "--mesh", (dir / "bad.off").string(), "--charges", (dir / "q.txt").string()});
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.err.find("error:"), std::string::npos);
    EXPECT_NE(run({"bem"}).code, 0);
    EXPECT_NE(run({"bem", "--icosphere", "1", "--subdivisions", "9"}).code, 0);
    EXPECT_NE(run({"bem", "--icosphere", "1", "--eps-out", "0.5", "--linear"}).code, 0);
}

TEST(CliValidate, AllColumnsPass) {
    const auto r = run({"validate"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("PASS: 30 of 30 column checks passed"), std::string::npos) << r.out;
    const auto p = run({"--params", (data_dir / "params_published.json").string(), "validate"});
    EXPECT_EQ(p.code, 0) << p.out;
}

TEST(CliValidate, WithoutDataWarns) {
    const auto r = run({"--data-dir", "/nonexistent/hsbc", "validate"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("nothing validated"), std::string::npos);
}

TEST(CliUsage, ParseErrors) {
    EXPECT_NE(run({}).code, 0);
    EXPECT_NE(run({"frobnicate"}).code, 0);
    EXPECT_NE(run({"--format", "xml", "tables"}).code, 0);
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_NE(run({"tables", "--solvent", "Hexane"}).code, 0);
    EXPECT_NE(run({"tables", "--ions", "Xx+"}).code, 0);
}

TEST(CliBinary, ExitCodes) {
    const std::string exe = HSBC_CLI_PATH;
    EXPECT_EQ(std::system((exe + " validate > /dev/null").c_str()), 0);
    EXPECT_NE(std::system((exe + " tables --solvent Hexane > /dev/null 2>&1").c_str()), 0);
    const auto dir = oracle::scratch_dir("cli_binary");
    const auto out = dir / "t.csv";
    ASSERT_EQ(std::system((exe + " --out " + out.string() + " tables --solvent DMF").c_str()), 0);
    std::ifstream f(out);
    std::string head;
    std::getline(f, head);
    EXPECT_EQ(head.rfind("solvent,T_C,ion", 0), 0u);
}
