#pragma once
// PNG snapshots of finished runs.

#include <cstdint>
#include <filesystem>
#include <vector>

namespace hped {

struct Image {
    int width{0};
    int height{0};
    std::vector<std::uint8_t> rgb;  ///< row-major, top row first

    Image() = default;
    Image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b);
    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
    const std::uint8_t* at(int x, int y) const { return &rgb[(static_cast<std::size_t>(y) * width + x) * 3]; }
};

/// 8-bit RGB PNG. Throws ScenarioError(Io) on failure.
void write_png(const std::filesystem::path& path, const Image& img);
/// Reads PNGs produced by write_png (8-bit RGB, filter type 0 only).
Image read_png(const std::filesystem::path& path);

struct RenderOptions {
    /// Render every `stride`-th trajectory sample time.
    int stride{1};
    double pixels_per_m{20.0};
    bool heatmaps{true};
};

/// Renders frame_NNNNN.png (zones, annuli, agents by model) and, if
/// density frames exist, heat_NNNNN.png into out_dir. Returns the number of
/// frame images. Throws ScenarioError(Io) when inputs are missing.
int render_run(const std::filesystem::path& run_dir, const std::filesystem::path& out_dir, const RenderOptions& opt);

}  // namespace hped
