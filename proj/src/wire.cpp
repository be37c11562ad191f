// SPDX-License-Identifier: Apache-2.0
#include "qmoney/wire.hpp"

#include <cstring>

namespace qmoney {

namespace {

void append_lp(Bytes& out, const Bytes& payload) {
  append_u32_be(out, static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
}

void append_double_be(Bytes& out, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, sizeof(u));
  for (int i = 7; i >= 0; --i)
    out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
}

Bytes encode_signature(const MintSignature& sig) {
  Bytes out;
  append_u32_be(out, sig.index);
  Bytes reveals;
  reveals.reserve((sig.reveals.size() + sig.cover.size()) * kDigestLen);
  for (const Digest& d : sig.reveals)
    reveals.insert(reveals.end(), d.begin(), d.end());
  for (const Digest& d : sig.cover)
    reveals.insert(reveals.end(), d.begin(), d.end());
  append_lp(out, reveals);
  Bytes path;
  path.reserve(sig.auth_path.size() * kDigestLen);
  for (const Digest& d : sig.auth_path)
    path.insert(path.end(), d.begin(), d.end());
  append_lp(out, path);
  return out;
}

Bytes encode_token(const OtmToken& token) {
  Bytes out;
  append_u32_be(out, static_cast<std::uint32_t>(token.b.size()));
  append_u32_be(out, static_cast<std::uint32_t>(token.s0.size()));
  const Bytes pb = pack_bits(token.b);
  const Bytes pt = pack_bits(token.theta);
  out.insert(out.end(), pb.begin(), pb.end());
  out.insert(out.end(), pt.begin(), pt.end());
  out.insert(out.end(), token.s0.begin(), token.s0.end());
  out.insert(out.end(), token.s1.begin(), token.s1.end());
  append_double_be(out, token.delta);
  return out;
}

// Bounds-checked sequential reader.
struct Reader {
  std::span<const std::uint8_t> data;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > data.size())
      throw MalformedBlob("banknote blob truncated at offset " +
                          std::to_string(pos));
  }
  std::uint8_t u8() {
    need(1);
    return data[pos++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data[pos++];
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u = (u << 8) | data[pos++];
    double v;
    std::memcpy(&v, &u, sizeof(v));
    return v;
  }
  Bytes raw(std::size_t n) {
    need(n);
    Bytes out(data.begin() + pos, data.begin() + pos + n);
    pos += n;
    return out;
  }
  Digest digest() {
    need(kDigestLen);
    Digest d;
    std::memcpy(d.data(), data.data() + pos, kDigestLen);
    pos += kDigestLen;
    return d;
  }
  Bytes lp() {
    const std::uint32_t n = u32();
    return raw(n);
  }
};

MintSignature decode_signature(const Bytes& blob) {
  Reader r{blob};
  MintSignature sig;
  sig.index = r.u32();
  const Bytes reveals = r.lp();
  const std::size_t half = 8 * kDigestLen;  // 256 digests per block
  if (reveals.size() != 2 * half * kDigestLen)
    throw MalformedBlob("signature reveal block has wrong size");
  sig.reveals.resize(half);
  sig.cover.resize(half);
  for (std::size_t i = 0; i < half; ++i)
    std::memcpy(sig.reveals[i].data(), reveals.data() + i * kDigestLen,
                kDigestLen);
  for (std::size_t i = 0; i < half; ++i)
    std::memcpy(sig.cover[i].data(),
                reveals.data() + (half + i) * kDigestLen, kDigestLen);
  const Bytes path = r.lp();
  if (path.size() % kDigestLen != 0)
    throw MalformedBlob("signature auth path has wrong size");
  sig.auth_path.resize(path.size() / kDigestLen);
  for (std::size_t i = 0; i < sig.auth_path.size(); ++i)
    std::memcpy(sig.auth_path[i].data(), path.data() + i * kDigestLen,
                kDigestLen);
  if (r.pos != blob.size())
    throw MalformedBlob("trailing bytes in signature blob");
  return sig;
}

OtmToken decode_token(const Bytes& blob) {
  Reader r{blob};
  OtmToken token;
  const std::uint32_t n = r.u32();
  const std::uint32_t slen = r.u32();
  const std::size_t packed = (n + 7) / 8;
  token.b = unpack_bits(r.raw(packed), n);
  token.theta = unpack_bits(r.raw(packed), n);
  token.s0 = r.raw(slen);
  token.s1 = r.raw(slen);
  token.delta = r.f64();
  if (r.pos != blob.size())
    throw MalformedBlob("trailing bytes in hardware blob");
  return token;
}

}  // namespace

Bytes serialize_banknote(const Banknote& note) {
  if (!note.classical) throw MalformedBlob("serialize: note has no classical data");
  const auto& cls = *note.classical;
  const std::uint32_t zeta = cls.zeta;

  Bytes out;
  out.push_back(kWireVersion);
  out.insert(out.end(), cls.note_id.begin(), cls.note_id.end());
  append_u32_be(out, zeta);

  for (const Digest& d : cls.hashes) out.insert(out.end(), d.begin(), d.end());
  for (const MintSignature& sig : cls.sigs) append_lp(out, encode_signature(sig));

  Bytes bitmap((zeta + 7) / 8, 0);
  for (const auto& [j, inst] : note.otms) {
    (void)inst;
    bitmap[j / 8] |= static_cast<std::uint8_t>(1u << (j % 8));
  }
  out.insert(out.end(), bitmap.begin(), bitmap.end());

  append_u32_be(out, static_cast<std::uint32_t>(note.revealed.size()));
  for (const auto& [k, e] : note.revealed) {
    append_u32_be(out, k);
    out.push_back(e.bit);
    out.insert(out.end(), e.kappa.begin(), e.kappa.end());
  }

  for (const auto& [j, inst] : note.otms) {
    (void)j;
    if (!inst.token)
      throw MalformedBlob("serialize: sealed memory without hardware blob");
    append_lp(out, encode_token(*inst.token));
  }
  return out;
}

Banknote deserialize_banknote(std::span<const std::uint8_t> blob,
                              std::size_t kappa_len) {
  Reader r{blob};
  if (r.u8() != kWireVersion)
    throw MalformedBlob("unsupported banknote format version");

  auto cls = std::make_shared<NoteClassical>();
  cls->note_id = r.digest();
  cls->zeta = r.u32();
  if (cls->zeta == 0 || cls->zeta > (1u << 20))
    throw MalformedBlob("implausible zeta");
  cls->hashes.resize(2 * static_cast<std::size_t>(cls->zeta));
  for (Digest& d : cls->hashes) d = r.digest();
  cls->sigs.resize(cls->hashes.size());
  for (MintSignature& sig : cls->sigs) sig = decode_signature(r.lp());

  Banknote note;
  const Bytes bitmap = r.raw((cls->zeta + 7) / 8);
  for (std::uint32_t j = 0; j < cls->zeta; ++j)
    if ((bitmap[j / 8] >> (j % 8)) & 1u) note.otms.emplace(j, OtmInstance{});

  const std::uint32_t nrev = r.u32();
  for (std::uint32_t n = 0; n < nrev; ++n) {
    const std::uint32_t k = r.u32();
    RevealedEntry e;
    e.bit = r.u8() & 1;
    e.kappa = r.raw(kappa_len);
    if (!note.revealed.emplace(k, std::move(e)).second)
      throw MalformedBlob("duplicate revealed index");
  }

  for (auto& [j, inst] : note.otms) {
    (void)j;
    inst.token = std::make_shared<const OtmToken>(decode_token(r.lp()));
  }
  if (r.pos != blob.size()) throw MalformedBlob("trailing bytes in banknote blob");

  note.classical = std::move(cls);
  return note;
}

}  // namespace qmoney
