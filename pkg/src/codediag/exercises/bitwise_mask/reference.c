#include <stdio.h>

int main() {
    unsigned int value;
    unsigned int second;
    int p;
    int n;
    unsigned int mask;
    scanf("%x", &value);
    scanf("%x", &second);
    scanf("%d", &p);
    scanf("%d", &n);
    mask = (1 << n) - 1;
    value = (value & ~(mask << p)) | ((second & mask) << p);
    printf("%x\n", value);
    return 0;
}
