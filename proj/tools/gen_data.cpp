// Generates the bundled synthetic stand-in datasets under data/synthetic/.
// Shapes (rows, columns, delimiters, headers, missing cells, duplicate rows)
// mirror the five UCI sources the benchmark targets. Values follow a latent
// factor model: most features load on a dominant factor with a weak second
// factor mixed into every third column, echoing the strong inter-feature
// correlations of the real tables, and targets are nonlinear in the factors.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "svx/rng.hpp"

namespace {

using Row = std::vector<double>;

std::string format_cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void write_rows(std::ofstream& os, const std::vector<Row>& rows, char delim) {
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c) os << delim;
            os << format_cell(r[c]);
        }
        os << '\n';
    }
}

double sgn(double v) { return v >= 0.0 ? 1.0 : -1.0; }

// Correlated feature block: column j carries the dominant factor z0 with an
// alternating sign and a per-column load; every third column mixes in z1.
double feature(int j, double z0, double z1, double fnoise, svx::Rng& rng) {
    const double load = 0.7 + 0.15 * ((j * 5) % 3);
    const double s = (j % 2) ? -1.0 : 1.0;
    const double mix = (j % 3 == 2) ? 0.3 : 0.0;
    return s * load * ((1.0 - mix) * z0 + mix * z1) + fnoise * rng.next_normal();
}

// wine: 11 features + quality, ';' delimited with header, 1599 raw rows of
// which 240 are exact duplicates (1359 unique).
void gen_wine(const std::filesystem::path& dir) {
    svx::Rng rng(101);
    std::vector<Row> rows;
    for (int i = 0; i < 1359; ++i) {
        Row r(12);
        const double z0 = rng.next_normal(), z1 = rng.next_normal();
        for (int j = 0; j < 11; ++j)
            r[static_cast<std::size_t>(j)] = 2.0 + feature(j, z0, z1, 0.10, rng);
        r[11] = 5.5 + 2.0 * sgn(z0 - 0.3) + 1.1 * sgn(z0 + 0.9) +
                1.6 * std::exp(-(z0 - 0.4) * (z0 - 0.4) / 0.32) + 0.8 * sgn(z1) * sgn(z0) +
                0.03 * rng.next_normal();
        rows.push_back(std::move(r));
    }
    for (int i = 0; i < 240; ++i)
        rows.push_back(rows[static_cast<std::size_t>(rng.next_below(1359))]);
    for (std::size_t i = rows.size() - 1; i > 0; --i)
        std::swap(rows[i], rows[rng.next_below(i + 1)]);

    std::ofstream os(dir / "wine.csv");
    os << "fixed_acidity;volatile_acidity;citric_acid;residual_sugar;chlorides;"
          "free_sulfur_dioxide;total_sulfur_dioxide;density;pH;sulphates;alcohol;quality\n";
    write_rows(os, rows, ';');
}

// boston: 13 features + medv, whitespace delimited, no header, 506 rows.
void gen_boston(const std::filesystem::path& dir) {
    svx::Rng rng(102);
    std::vector<Row> rows;
    for (int i = 0; i < 506; ++i) {
        Row r(14);
        const double z0 = rng.next_normal(), z1 = rng.next_normal();
        for (int j = 0; j < 13; ++j)
            r[static_cast<std::size_t>(j)] = 4.0 + feature(j, z0, z1, 0.10, rng);
        r[13] = 22.0 + 2.2 * sgn(z0 + 0.1) + 1.0 * sgn(z0 - 1.0) +
                1.5 * std::exp(-(z0 + 0.5) * (z0 + 0.5) / 0.40) + 0.9 * sgn(z1) * sgn(z0) +
                0.03 * rng.next_normal();
        rows.push_back(std::move(r));
    }
    std::ofstream os(dir / "boston.csv");
    write_rows(os, rows, ' ');
}

// yacht: 6 features + residuary resistance, whitespace, no header, 308 rows.
void gen_yacht(const std::filesystem::path& dir) {
    svx::Rng rng(103);
    std::vector<Row> rows;
    for (int i = 0; i < 308; ++i) {
        Row r(7);
        const double z0 = rng.next_normal(), z1 = rng.next_normal();
        for (int j = 0; j < 6; ++j)
            r[static_cast<std::size_t>(j)] = 1.0 + feature(j, z0, z1, 0.10, rng);
        r[6] = 10.0 + 2.0 * sgn(z0 - 0.2) + 1.2 * sgn(z0 + 1.1) +
               1.5 * std::exp(-z0 * z0 / 0.36) + 0.7 * sgn(z1) * sgn(z0) +
               0.03 * rng.next_normal();
        rows.push_back(std::move(r));
    }
    std::ofstream os(dir / "yacht.csv");
    write_rows(os, rows, ' ');
}

// machine: 9 features + PRP, comma with header, 209 rows.
void gen_machine(const std::filesystem::path& dir) {
    svx::Rng rng(104);
    std::vector<Row> rows;
    for (int i = 0; i < 209; ++i) {
        Row r(10);
        const double z0 = rng.next_normal(), z1 = rng.next_normal();
        for (int j = 0; j < 9; ++j)
            r[static_cast<std::size_t>(j)] = 6.0 + feature(j, z0, z1, 0.05, rng);
        r[9] = 50.0 + 2.1 * sgn(z0 - 0.4) + 1.0 * sgn(z0 + 0.7) +
               1.7 * std::exp(-(z0 - 0.2) * (z0 - 0.2) / 0.30) + 0.8 * sgn(z1) * sgn(z0) +
               0.03 * rng.next_normal();
        rows.push_back(std::move(r));
    }
    std::ofstream os(dir / "machine.csv");
    os << "myct,mmin,mmax,cach,chmin,chmax,f7,f8,f9,prp\n";
    write_rows(os, rows, ',');
}

// auto: 6 features + mpg, comma with header, 404 raw rows of which 6 carry a
// '?' cell (398 parsable).
void gen_auto(const std::filesystem::path& dir) {
    svx::Rng rng(105);
    std::vector<Row> rows;
    for (int i = 0; i < 404; ++i) {
        Row r(7);
        const double z0 = rng.next_normal(), z1 = rng.next_normal();
        for (int j = 0; j < 6; ++j)
            r[static_cast<std::size_t>(j)] = 3.0 + feature(j, z0, z1, 0.10, rng);
        r[6] = 23.0 + 2.0 * sgn(z0 + 0.3) + 1.2 * sgn(z0 - 0.8) +
               1.6 * std::exp(-(z0 + 0.2) * (z0 + 0.2) / 0.36) + 0.8 * sgn(z1) * sgn(z0) +
               0.03 * rng.next_normal();
        rows.push_back(std::move(r));
    }
    std::ofstream os(dir / "auto.csv");
    os << "displacement,horsepower,weight,acceleration,model_year,origin,mpg\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const bool missing = i % 67 == 3 && i < 67 * 6 + 4;  // 6 rows with a '?' cell
        for (std::size_t c = 0; c < rows[i].size(); ++c) {
            if (c) os << ',';
            if (missing && c == 1)
                os << '?';
            else
                os << format_cell(rows[i][c]);
        }
        os << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : "data/synthetic";
    std::filesystem::create_directories(dir);
    gen_wine(dir);
    gen_boston(dir);
    gen_yacht(dir);
    gen_machine(dir);
    gen_auto(dir);
    std::cout << "wrote synthetic datasets to " << dir << '\n';
    return 0;
}
