// End-to-end walkthrough: build the binary 3-dimensional spread code over
// F_2^6, push one codeword through a noisy channel, and decode it back.

#include <cstdio>

#include "spreadec/spreadec.hpp"

using namespace spreadec;

int main() {
    SpreadParams params = make_spread_params(2, 3, 2);
    const FieldTower& tower = *params.tower;
    std::printf("code: q=%u k=%u l=%u n=%u, %llu codewords, minimum distance %u\n", params.q(), params.k, params.l,
                params.n, static_cast<unsigned long long>(params.code_cardinality()), params.min_distance());

    // a one-dimensional reception is always enough when no errors occurred
    Subspace received = Subspace::row_space(parse_matrix(tower, "110|101"));
    DecodeReport report = decode_improved(params, received);
    std::printf("\nreceived (110|101):\n%s", report_to_text(tower, report).c_str());
    std::printf("codeword:\n%s", format_matrix(report.codeword->space.basis(), params.k).c_str());

    // now a transmission with one erasure and one inserted error
    Rng rng(7);
    Codeword sent = encode(params, parse_gamma(tower, "1,0,0;1,1,0"));
    TransmitResult channel = transmit(params, sent, ChannelConfig{1, 1}, rng);
    std::printf("\nchannel delivered a %u-dimensional space:\n%s",
                channel.received.dim(), format_matrix(channel.received.basis(), params.k).c_str());
    DecodeReport noisy = decode_improved(params, channel.received);
    std::printf("%s", report_to_text(tower, noisy).c_str());
    std::printf("decoded %s\n", noisy.decodable() && noisy.codeword->space == sent.space ? "correctly" : "WRONG");
    return 0;
}
