#if defined(__GNUC__)
#pragma GCC diagnostic ignored "-Wunused-function"
#pragma GCC diagnostic ignored "-Wsign-compare"
#pragma GCC diagnostic ignored "-Wmissing-field-initializers"
#pragma GCC diagnostic ignored "-Wunused-but-set-variable"
#pragma GCC diagnostic ignored "-Wimplicit-fallthrough"
#pragma GCC diagnostic ignored "-Wtype-limits"
#endif

#include <cstdlib>

#include <zlib.h>

#define STB_TRUETYPE_IMPLEMENTATION
#include <stb_truetype.h>

#define STB_IMAGE_IMPLEMENTATION
#define STBI_NO_HDR
#define STBI_NO_LINEAR
#define STBI_NO_PSD
#define STBI_NO_PIC
#define STBI_NO_PNM
#include <stb_image.h>

namespace {

// PNG deflate through zlib at level 1; stb's built-in deflate is several
// times slower.
unsigned char* zlib_compress(unsigned char* data, int len, int* outLen, int /*quality*/) {
  uLongf cap = compressBound(static_cast<uLong>(len));
  auto* out = static_cast<unsigned char*>(std::malloc(cap));
  if (!out) return nullptr;
  if (compress2(out, &cap, data, static_cast<uLong>(len), 1) != Z_OK) {
    std::free(out);
    return nullptr;
  }
  *outLen = static_cast<int>(cap);
  return out;
}

}  // namespace

#define STBIW_ZLIB_COMPRESS zlib_compress
#define STB_IMAGE_WRITE_IMPLEMENTATION
#include <stb_image_write.h>

namespace {
// Fixed "Up" row filter instead of per-row filter search.
const bool png_filter_set = (stbi_write_force_png_filter = 2, true);
}  // namespace
