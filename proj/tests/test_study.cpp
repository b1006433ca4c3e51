#include "hho/error.hpp"
#include "hho/study.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace hho;

TEST(Family, ParseRoundTrip)
{
    for (auto f : {MeshFamily::Interval, MeshFamily::Square, MeshFamily::TriSquare, MeshFamily::LShape,
                   MeshFamily::Hex, MeshFamily::Disk, MeshFamily::File})
        EXPECT_EQ(parse_family(to_string(f)), f);
    EXPECT_THROW(parse_family("cube"), ConfigError);
    EXPECT_TRUE(uses_subdivisions(MeshFamily::LShape));
    EXPECT_FALSE(uses_subdivisions(MeshFamily::Hex));
    EXPECT_EQ(family_domain(MeshFamily::TriSquare), Domain::Square);
    EXPECT_FALSE(family_domain(MeshFamily::File).has_value());
}

TEST(Family, BuildsMeshes)
{
    EXPECT_EQ(build_family_mesh(MeshFamily::Square, 4).num_cells(), 16u);
    EXPECT_EQ(build_family_mesh(MeshFamily::TriSquare, 4).num_cells(), 32u);
    EXPECT_EQ(build_family_mesh(MeshFamily::LShape, 4).num_cells(), 96u);
    EXPECT_THROW(build_family_mesh(MeshFamily::File, 0), ConfigError);
}

TEST(Eta, Parse)
{
    EXPECT_TRUE(EtaSpec::parse("auto").automatic);
    EXPECT_EQ(EtaSpec::parse("auto").resolve(2), 7.0);
    EXPECT_EQ(EtaSpec::parse("0.25").resolve(2), 0.25);
    EXPECT_THROW(EtaSpec::parse("-1"), ConfigError);
    EXPECT_THROW(EtaSpec::parse("0"), ConfigError);
    EXPECT_THROW(EtaSpec::parse("fast"), ConfigError);
}

TEST(Config, Validation)
{
    StudyConfig c;
    c.levels = {10, 20};
    EXPECT_NO_THROW(c.validate());
    c.degree = 4;
    EXPECT_THROW(c.validate(), ConfigError);
    c.degree = -1;
    EXPECT_THROW(c.validate(), ConfigError);
    c.degree = 1;
    c.modes = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c.modes = 1;
    c.levels.clear();
    EXPECT_THROW(c.validate(), ConfigError);
    c.levels = {0};
    EXPECT_THROW(c.validate(), ConfigError);
    c.levels = {2};
    c.family = MeshFamily::File;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_EQ(c.error_quadrature_order(), 8);
}

TEST(Format, ShortestRoundTrip)
{
    for (double v : {0.1, 1.0 / 3.0, 9.6397238440219, 1e-300, 6.02214076e23, 2.0})
        EXPECT_EQ(std::stod(format_shortest(v)), v);
    EXPECT_EQ(format_shortest(0.1), "0.1");
    EXPECT_EQ(format_shortest(2.0), "2");
}

TEST(Study, IntervalRowsAndOrders)
{
    StudyConfig c;
    c.levels = {10, 20, 40};
    c.modes = 2;
    const ConvergenceStudy s = run_eigen_study(c);
    ASSERT_EQ(s.rows.size(), 6u);
    const auto m1 = s.mode_rows(1);
    ASSERT_EQ(m1.size(), 3u);
    EXPECT_NEAR(*m1[0].rel_err, 3.19e-2, 5e-5);
    EXPECT_FALSE(m1[0].order.has_value());
    EXPECT_NEAR(*m1[2].order, 1.99, 0.01);
    EXPECT_EQ(m1[1].level, 20u);
    EXPECT_NEAR(m1[1].h, 0.05, 1e-15);
}

TEST(Study, CsvIsDeterministic)
{
    StudyConfig c;
    c.family = MeshFamily::TriSquare;
    c.degree = 1;
    c.eta = EtaSpec::parse("auto");
    c.levels = {2, 4};
    c.modes = 3;
    std::ostringstream a, b;
    write_csv(run_eigen_study(c), a);
    write_csv(run_eigen_study(c), b);
    EXPECT_EQ(a.str(), b.str());
    std::istringstream in(a.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, csv_header);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
        EXPECT_NE(line.find(",5,"), std::string::npos) << "eta column";
    }
    EXPECT_EQ(rows, 6u);
}

TEST(Study, LShapeReportsOnlyKnownModes)
{
    StudyConfig c;
    c.family = MeshFamily::LShape;
    c.levels = {2, 4};
    c.modes = 3;
    const ConvergenceStudy s = run_eigen_study(c);
    EXPECT_TRUE(s.mode_rows(1)[1].rel_err.has_value());
    EXPECT_FALSE(s.mode_rows(2)[1].rel_err.has_value());
    EXPECT_NEAR(*s.mode_rows(3)[0].lambda_exact, 2 * std::numbers::pi * std::numbers::pi, 1e-12);
}

TEST(Source, SineOrders)
{
    StudyConfig c;
    c.levels = {10, 20, 40};
    for (int k = 0; k <= 2; ++k) {
        c.degree = k;
        const auto rows = run_source_study(c);
        ASSERT_EQ(rows.size(), 3u);
        EXPECT_NEAR(*rows[2].order, k + 1.0, 0.05) << "k=" << k;
    }
    const auto zero = run_source_study(c, ManufacturedSolution::Zero);
    for (const auto& r : zero)
        EXPECT_EQ(r.h1_error, 0.0);
    c.family = MeshFamily::LShape;
    c.levels = {2, 4};
    EXPECT_THROW(run_source_study(c), ConfigError);
    EXPECT_THROW(parse_manufactured("cosine"), ConfigError);
}
