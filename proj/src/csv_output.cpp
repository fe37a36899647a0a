#include "bgi/csv_output.hpp"

#include <fstream>
#include <sstream>

#include "bgi/errors.hpp"
#include "bgi/raster.hpp"

namespace bgi {

namespace {

std::ofstream open_output(std::filesystem::path const& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return out;
}

void finish(std::ofstream& out, std::filesystem::path const& path)
{
    out.flush();
    if (!out) {
        throw Error("failed writing " + path.string());
    }
}

std::vector<std::string> split_fields(std::string const& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

template <typename T>
T parse_number(std::string const& text, std::filesystem::path const& path, std::size_t line)
{
    std::istringstream in(text);
    T value{};
    in >> value;
    if (!in || !in.eof()) {
        throw ParseError(path.string() + ":" + std::to_string(line) + ": bad number '" + text + "'");
    }
    return value;
}

} // namespace

void write_pareto_csv(std::filesystem::path const& path, ParetoFront const& front)
{
    auto out = open_output(path);
    out << "genome_bits,cost,risk,generation_found\n";
    for (auto const& m : front.members) {
        out << m.genome.to_string() << ',' << format_double(m.objectives.cost) << ',' << m.objectives.risk << ',';
        if (m.generation_found) {
            out << *m.generation_found;
        }
        out << '\n';
    }
    finish(out, path);
}

ParetoFront read_pareto_csv(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ScenarioError(ScenarioError::Kind::missing_file, "cannot read " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line.rfind("genome_bits,cost,risk", 0) != 0) {
        throw ParseError(path.string() + ": expected a genome_bits,cost,risk header");
    }
    ParetoFront front;
    front.source = ParetoFront::Source::oracle;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto const fields = split_fields(line);
        if (fields.size() < 3) {
            throw ParseError(path.string() + ":" + std::to_string(number) + ": too few fields");
        }
        ParetoMember m;
        m.genome = Genome::from_string(fields[0]);
        m.objectives.cost = parse_number<double>(fields[1], path, number);
        m.objectives.risk = parse_number<std::int64_t>(fields[2], path, number);
        if (fields.size() > 3 && !fields[3].empty()) {
            m.generation_found = parse_number<std::size_t>(fields[3], path, number);
            front.source = ParetoFront::Source::optimizer;
        }
        front.members.push_back(std::move(m));
    }
    return front;
}

void write_repository_csv(std::filesystem::path const& path, SolutionRepository const& repo)
{
    auto out = open_output(path);
    out << "genome_bits,cost,risk,generation\n";
    for (auto const& e : repo.entries()) {
        out << e.genome.to_string() << ',';
        if (e.objectives) {
            out << format_double(e.objectives->cost) << ',' << e.objectives->risk;
        } else {
            out << ',';
        }
        out << ',' << e.generation << '\n';
    }
    finish(out, path);
}

void write_repository_csv(std::filesystem::path const& path, EnumerationResult const& result)
{
    auto out = open_output(path);
    out << "genome_bits,cost,risk,generation\n";
    for (std::size_t k = 0; k < result.objectives.size(); ++k) {
        auto const& o = result.objectives[k];
        out << result.genome(k).to_string() << ',' << format_double(o.cost) << ',' << o.risk << ",0\n";
    }
    finish(out, path);
}

void write_history_csv(std::filesystem::path const& path, std::vector<ConvergenceRecord> const& records,
                       bool with_reference)
{
    auto out = open_output(path);
    out << "generation,front_size,repo_fraction,converged_flag\n";
    for (auto const& r : records) {
        out << r.generation << ',' << r.front_size << ',' << format_double(r.repository_fraction) << ',';
        if (with_reference) {
            out << (r.converged ? 1 : 0);
        }
        out << '\n';
    }
    finish(out, path);
}

void write_contribution_csv(std::filesystem::path const& path, ZoneContribution const& contribution,
                            std::vector<std::string> const& labels)
{
    if (labels.size() != contribution.fractions.size()) {
        throw InvalidArgument("zone labels do not match the contribution table");
    }
    auto out = open_output(path);
    out << "zone_id,fraction,band\n";
    for (std::size_t j = 0; j < labels.size(); ++j) {
        out << labels[j] << ',' << format_double(contribution.fractions[j]) << ',' << contribution.bands[j] << '\n';
    }
    finish(out, path);
}

void write_text(std::filesystem::path const& path, std::string const& text)
{
    auto out = open_output(path);
    out << text;
    finish(out, path);
}

} // namespace bgi
