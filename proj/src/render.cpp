#include "hped/render.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "hped/scenario.hpp"

namespace hped {

Image::Image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b)
    : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3) {
    for (std::size_t i = 0; i < rgb.size(); i += 3) {
        rgb[i] = r;
        rgb[i + 1] = g;
        rgb[i + 2] = b;
    }
}

void Image::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (x < 0 || y < 0 || x >= width || y >= height) return;
    std::uint8_t* p = &rgb[(static_cast<std::size_t>(y) * width + x) * 3];
    p[0] = r;
    p[1] = g;
    p[2] = b;
}

namespace {

constexpr std::uint8_t kSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

void put_u32(std::string& out, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<char>((v >> s) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | static_cast<std::uint8_t>(in[at + i]);
    return v;
}

void put_chunk(std::string& out, const char* type, const std::string& data) {
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    std::string body(type, 4);
    body += data;
    out += body;
    put_u32(out, static_cast<std::uint32_t>(
                     crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()))));
}

[[noreturn]] void io_error(const std::string& what) { throw ScenarioError(ScenarioError::Kind::Io, what); }

}  // namespace

void write_png(const std::filesystem::path& path, const Image& img) {
    std::string raw;
    raw.reserve(static_cast<std::size_t>(img.height) * (img.width * 3 + 1));
    for (int y = 0; y < img.height; ++y) {
        raw.push_back(0);
        raw.append(reinterpret_cast<const char*>(img.at(0, y)), static_cast<std::size_t>(img.width) * 3);
    }
    uLongf zsize = compressBound(static_cast<uLong>(raw.size()));
    std::string z(zsize, '\0');
    if (compress2(reinterpret_cast<Bytef*>(z.data()), &zsize, reinterpret_cast<const Bytef*>(raw.data()),
                  static_cast<uLong>(raw.size()), 6) != Z_OK) {
        io_error("png compression failed");
    }
    z.resize(zsize);

    std::string out(reinterpret_cast<const char*>(kSignature), 8);
    std::string ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(img.width));
    put_u32(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr += std::string("\x08\x02\x00\x00\x00", 5);
    put_chunk(out, "IHDR", ihdr);
    put_chunk(out, "IDAT", z);
    put_chunk(out, "IEND", "");
    std::ofstream f(path, std::ios::binary);
    if (!f) io_error("cannot write " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

Image read_png(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) io_error("cannot read " + path.string());
    const std::string in((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (in.size() < 8 || in.compare(0, 8, std::string(reinterpret_cast<const char*>(kSignature), 8)) != 0) {
        io_error("not a png: " + path.string());
    }
    Image img;
    std::string z;
    for (std::size_t at = 8; at + 12 <= in.size();) {
        const std::uint32_t len = get_u32(in, at);
        const std::string type = in.substr(at + 4, 4);
        const std::string data = in.substr(at + 8, len);
        if (type == "IHDR") {
            img.width = static_cast<int>(get_u32(data, 0));
            img.height = static_cast<int>(get_u32(data, 4));
            if (data[8] != 8 || data[9] != 2) io_error("unsupported png layout");
        } else if (type == "IDAT") {
            z += data;
        }
        at += 12 + len;
    }
    const std::size_t stride = static_cast<std::size_t>(img.width) * 3 + 1;
    uLongf size = static_cast<uLongf>(stride * img.height);
    std::string raw(size, '\0');
    if (uncompress(reinterpret_cast<Bytef*>(raw.data()), &size, reinterpret_cast<const Bytef*>(z.data()),
                   static_cast<uLong>(z.size())) != Z_OK) {
        io_error("corrupt png data");
    }
    img.rgb.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    for (int y = 0; y < img.height; ++y) {
        if (raw[y * stride] != 0) io_error("unsupported png filter");
        std::copy_n(raw.begin() + static_cast<std::ptrdiff_t>(y * stride + 1), img.width * 3,
                    img.rgb.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(y) * img.width * 3));
    }
    return img;
}

namespace {

struct Canvas {
    Image img;
    Vec2 lo;
    double scale;

    Vec2 world(int x, int y) const { return {lo.x + (x + 0.5) / scale, lo.y + (img.height - y - 0.5) / scale}; }
    std::pair<int, int> pixel(const Vec2& p) const {
        return {static_cast<int>(std::floor((p.x - lo.x) * scale)),
                img.height - 1 - static_cast<int>(std::floor((p.y - lo.y) * scale))};
    }
    void disk(const Vec2& c, double r, std::uint8_t R, std::uint8_t G, std::uint8_t B) {
        const auto [cx, cy] = pixel(c);
        const int pr = static_cast<int>(std::ceil(r * scale)) + 1;
        for (int y = cy - pr; y <= cy + pr; ++y) {
            for (int x = cx - pr; x <= cx + pr; ++x) {
                if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
                if ((world(x, y) - c).norm2() <= r * r) img.set(x, y, R, G, B);
            }
        }
    }
};

struct ZoneState {
    Vec2 center;
    int k;
};

struct Sample {
    Vec2 p;
    char model;
};

}  // namespace

int render_run(const std::filesystem::path& run_dir, const std::filesystem::path& out_dir, const RenderOptions& opt) {
    const auto scen_path = run_dir / "scenario.json";
    const auto traj_path = run_dir / "trajectories.csv";
    if (!std::filesystem::exists(scen_path) || !std::filesystem::exists(traj_path)) {
        io_error("missing run outputs in " + run_dir.string());
    }
    const LoadedScenario ls = load_scenario(scen_path);
    const Scenario& s = ls.scenario;
    const SimParams& p = ls.params;

    std::map<double, std::vector<Sample>> frames;
    {
        std::ifstream f(traj_path);
        std::string line;
        std::getline(f, line);
        while (std::getline(f, line)) {
            std::stringstream ss(line);
            std::string t, id, x, y, model;
            std::getline(ss, t, ',');
            std::getline(ss, id, ',');
            std::getline(ss, x, ',');
            std::getline(ss, y, ',');
            std::getline(ss, model, ',');
            frames[std::stod(t)].push_back({{std::stod(x), std::stod(y)}, model.empty() ? 'C' : model[0]});
        }
    }
    std::vector<nlohmann::json> events;
    if (std::ifstream zf(run_dir / "zones.jsonl"); zf) {
        std::string line;
        while (std::getline(zf, line)) {
            if (!line.empty()) events.push_back(nlohmann::json::parse(line));
        }
    }
    std::filesystem::create_directories(out_dir);

    const auto [lo, hi] = s.bounds.bounds();
    const double scale = opt.pixels_per_m;
    const int w = std::max(1, static_cast<int>(std::ceil((hi.x - lo.x) * scale)));
    const int h = std::max(1, static_cast<int>(std::ceil((hi.y - lo.y) * scale)));
    Canvas base{Image(w, h, 255, 255, 255), lo, scale};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const Vec2 q = base.world(x, y);
            bool blocked = !point_in_polygon(q, s.bounds);
            for (const auto& o : s.obstacles) blocked = blocked || point_in_polygon(q, o);
            if (blocked) base.img.set(x, y, 90, 90, 90);
        }
    }

    if (frames.empty()) frames[0.0] = {};
    std::map<int, ZoneState> zones;
    std::size_t next_event = 0;
    const double R = p.zoom_radius_m;
    const double wtr = p.transit_width();
    int count = 0;
    int index = 0;
    for (const auto& [t, samples] : frames) {
        while (next_event < events.size() && events[next_event]["time_s"].get<double>() <= t + 1e-9) {
            const auto& e = events[next_event++];
            const int id = e["zone_id"].get<int>();
            const std::string what = e["event"].get<std::string>();
            if (what == "dissolved") {
                zones.erase(id);
            } else {
                zones[id] = {{e["center"][0].get<double>(), e["center"][1].get<double>()}, e["k"].get<int>()};
            }
        }
        if (index++ % std::max(1, opt.stride) != 0) continue;
        Canvas c = base;
        for (const auto& [id, z] : zones) c.disk(z.center, z.k * R + wtr, 255, 236, 160);
        for (const auto& [id, z] : zones) c.disk(z.center, z.k * R, 170, 210, 250);
        for (const auto& smp : samples) {
            if (smp.model == 'D') {
                c.disk(smp.p, p.torso_radius_m, 30, 70, 200);
            } else {
                c.disk(smp.p, p.torso_radius_m, 210, 40, 40);
            }
        }
        char name[32];
        std::snprintf(name, sizeof name, "frame_%05d.png", count);
        write_png(out_dir / name, c.img);
        ++count;
    }

    if (opt.heatmaps) {
        std::ifstream df(run_dir / "density_frames.txt");
        std::string line;
        int hcount = 0;
        while (df && std::getline(df, line)) {
            if (line.rfind("# t=", 0) != 0) continue;
            int rows = 0, cols = 0;
            const auto rp = line.find("rows=");
            const auto cp = line.find("cols=");
            if (rp == std::string::npos || cp == std::string::npos) continue;
            rows = std::stoi(line.substr(rp + 5));
            cols = std::stoi(line.substr(cp + 5));
            std::vector<double> rho(static_cast<std::size_t>(rows) * cols, 0.0);
            for (int m = 0; m < rows && std::getline(df, line); ++m) {
                std::stringstream ss(line);
                for (int n = 0; n < cols; ++n) ss >> rho[static_cast<std::size_t>(m) * cols + n];
            }
            const int cell_px = std::max(1, static_cast<int>(std::lround(p.cell_edge_m * scale)));
            Image img(cols * cell_px, rows * cell_px, 255, 255, 255);
            const double top = std::max(1e-9, 1.0 / (p.cell_edge_m * p.cell_edge_m));
            for (int m = 0; m < rows; ++m) {
                for (int n = 0; n < cols; ++n) {
                    const double v = std::clamp(rho[static_cast<std::size_t>(m) * cols + n] / top, 0.0, 1.0);
                    const auto r = static_cast<std::uint8_t>(255);
                    const auto g = static_cast<std::uint8_t>(255 * (1.0 - v));
                    const auto b = static_cast<std::uint8_t>(255 * (1.0 - v));
                    for (int dy = 0; dy < cell_px; ++dy) {
                        for (int dx = 0; dx < cell_px; ++dx) {
                            img.set(n * cell_px + dx, (rows - 1 - m) * cell_px + dy, r, g, b);
                        }
                    }
                }
            }
            char name[32];
            std::snprintf(name, sizeof name, "heat_%05d.png", hcount++);
            write_png(out_dir / name, img);
        }
    }
    return count;
}

}  // namespace hped
