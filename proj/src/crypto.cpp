#include "ppfl/crypto.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <stdexcept>

namespace ppfl {

namespace {

// One context per thread; re-initialized per digest. Avoids the per-call
// fetch/alloc cost of the one-shot EVP API on hot derivation paths.
EVP_MD_CTX* local_ctx() {
    thread_local EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    return ctx;
}

Digest32 sha256_two_part(const std::uint8_t* a, std::size_t alen, const std::uint8_t* b,
                         std::size_t blen) {
    EVP_MD_CTX* ctx = local_ctx();
    if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: init failed");
    if (alen > 0) EVP_DigestUpdate(ctx, a, alen);
    if (blen > 0) EVP_DigestUpdate(ctx, b, blen);
    Digest32 out{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx, out.data(), &len) != 1 || len != out.size())
        throw std::runtime_error("sha256: final failed");
    return out;
}

}  // namespace

Digest32 sha256(std::span<const std::uint8_t> data) {
    return sha256_two_part(data.data(), data.size(), nullptr, 0);
}

Digest32 sha256(const std::string& data) {
    return sha256_two_part(reinterpret_cast<const std::uint8_t*>(data.data()), data.size(),
                           nullptr, 0);
}

Digest32 prf(const Digest32& key, std::span<const std::uint8_t> msg) {
    return sha256_two_part(key.data(), key.size(), msg.data(), msg.size());
}

std::uint64_t prf_u64(const Digest32& key, std::span<const std::uint8_t> msg) {
    const Digest32 d = prf(key, msg);
    std::uint64_t out = 0;
    std::memcpy(&out, d.data(), sizeof(out));  // little-endian host
    return out;
}

std::string hex(std::span<const std::uint8_t> data) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

}  // namespace ppfl
