#include "fosdnn/csv_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fosdnn/errors.hpp"

namespace fosdnn {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("rename to " + path + " failed: " + ec.message());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_finite(const std::string& text, const std::string& file, std::size_t row) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        throw IngestError(file + ": row " + std::to_string(row) + ": cannot parse '" + text +
                          "' as a finite number");
    }
    return v;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::string content = read_file(path);
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < content.size()) {
        std::size_t nl = content.find('\n', start);
        if (nl == std::string::npos) {
            lines.push_back(content.substr(start));
            break;
        }
        std::string line = content.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(std::move(line));
        start = nl + 1;
    }
    while (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }
    return lines;
}

}  // namespace

FunctionalDataset load_dataset(const DatasetFiles& files, bool normalize,
                               std::vector<std::string>* warnings) {
    auto warn = [&](const std::string& msg) {
        if (warnings) {
            warnings->push_back(msg);
        } else {
            std::cerr << "warning: " << msg << "\n";
        }
    };

    // Covariates: one row per sample, establishes sample order and d.
    auto cov_lines = read_lines(files.covariates);
    if (cov_lines.empty()) {
        throw IngestError(files.covariates + ": missing header");
    }
    auto cov_header = split_csv_line(cov_lines[0]);
    if (cov_header.empty() || cov_header[0] != "sample_id") {
        throw IngestError(files.covariates + ": first column must be sample_id");
    }
    const std::size_t d = cov_header.size() - 1;

    FunctionalDataset data;
    data.d = static_cast<int>(d);
    std::map<std::string, std::size_t> index_of;
    std::vector<std::string> ids;
    for (std::size_t r = 1; r < cov_lines.size(); ++r) {
        auto fields = split_csv_line(cov_lines[r]);
        if (fields.size() != cov_header.size()) {
            throw IngestError(files.covariates + ": row " + std::to_string(r + 1) +
                              " has " + std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(cov_header.size()));
        }
        if (index_of.count(fields[0])) {
            throw IngestError(files.covariates + ": duplicate sample_id '" + fields[0] + "'");
        }
        FunctionalSample s;
        s.x.resize(d);
        for (std::size_t c = 0; c < d; ++c) {
            s.x[c] = parse_finite(fields[c + 1], files.covariates, r + 1);
        }
        index_of[fields[0]] = data.samples.size();
        ids.push_back(fields[0]);
        data.samples.push_back(std::move(s));
    }

    // Responses: grouped by sample, t strictly increasing within each group.
    auto resp_lines = read_lines(files.responses);
    if (resp_lines.empty()) {
        throw IngestError(files.responses + ": missing header");
    }
    auto resp_header = split_csv_line(resp_lines[0]);
    if (resp_header.size() != 3 || resp_header[0] != "sample_id" || resp_header[1] != "t" ||
        resp_header[2] != "y") {
        throw IngestError(files.responses + ": header must be sample_id,t,y");
    }
    std::vector<std::vector<double>> times(data.samples.size());
    std::vector<std::vector<double>> values(data.samples.size());
    for (std::size_t r = 1; r < resp_lines.size(); ++r) {
        auto fields = split_csv_line(resp_lines[r]);
        if (fields.size() != 3) {
            throw IngestError(files.responses + ": row " + std::to_string(r + 1) +
                              " has " + std::to_string(fields.size()) + " fields, expected 3");
        }
        auto it = index_of.find(fields[0]);
        if (it == index_of.end()) {
            throw IngestError(files.responses + ": sample_id '" + fields[0] +
                              "' has no covariate row");
        }
        double t = parse_finite(fields[1], files.responses, r + 1);
        double y = parse_finite(fields[2], files.responses, r + 1);
        auto& ts = times[it->second];
        if (!ts.empty() && !(t > ts.back())) {
            throw IngestError(files.responses + ": row " + std::to_string(r + 1) +
                              ": t not strictly increasing within sample '" + fields[0] + "'");
        }
        ts.push_back(t);
        values[it->second].push_back(y);
    }
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
        if (times[i].empty()) {
            throw IngestError(files.responses + ": sample_id '" + ids[i] +
                              "' has no response rows");
        }
        data.samples[i].grid = TimeGrid(std::move(times[i]));
        data.samples[i].y = std::move(values[i]);
    }

    if (files.metadata) {
        nlohmann::json meta = nlohmann::json::parse(read_file(*files.metadata));
        if (meta.contains("d") && meta.at("d").get<int>() != data.d) {
            throw IngestError(*files.metadata + ": d does not match covariate file");
        }
        if (meta.contains("n") &&
            meta.at("n").get<std::size_t>() != data.samples.size()) {
            throw IngestError(*files.metadata + ": n does not match covariate file");
        }
    }

    if (normalize && !data.samples.empty()) {
        const auto n = static_cast<double>(data.samples.size());
        for (std::size_t c = 0; c < d; ++c) {
            double mean = 0.0;
            for (const auto& s : data.samples) mean += s.x[c];
            mean /= n;
            double ss = 0.0;
            for (const auto& s : data.samples) {
                ss += (s.x[c] - mean) * (s.x[c] - mean);
            }
            double sd = n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
            if (sd == 0.0) {
                warn("covariate column " + std::to_string(c + 1) +
                     " is constant; left unnormalized");
                continue;
            }
            for (auto& s : data.samples) {
                s.x[c] = (s.x[c] - mean) / sd;
            }
        }
    }

    data.validate();
    return data;
}

void save_dataset(const FunctionalDataset& data, const DatasetFiles& files) {
    std::string cov = "sample_id";
    for (int c = 1; c <= data.d; ++c) {
        cov += ",x" + std::to_string(c);
    }
    cov += "\n";
    std::string resp = "sample_id,t,y\n";
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
        const auto& s = data.samples[i];
        cov += std::to_string(i);
        for (double v : s.x) {
            cov += ",";
            cov += format_double(v);
        }
        cov += "\n";
        for (std::size_t j = 0; j < s.grid.size(); ++j) {
            resp += std::to_string(i);
            resp += ",";
            resp += format_double(s.grid[j]);
            resp += ",";
            resp += format_double(s.y[j]);
            resp += "\n";
        }
    }
    atomic_write_file(files.covariates, cov);
    atomic_write_file(files.responses, resp);
    if (files.metadata) {
        nlohmann::json meta;
        meta["d"] = data.d;
        meta["n"] = data.samples.size();
        meta["grid"] = "per-sample strictly increasing time points in [0, 1]";
        atomic_write_file(*files.metadata, meta.dump(2));
    }
}

}  // namespace fosdnn
